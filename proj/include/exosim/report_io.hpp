#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "exosim/designopt.hpp"
#include "exosim/evalpipe.hpp"
#include "exosim/romsim.hpp"
#include "exosim/torquegen.hpp"

namespace exosim {

/// 9 significant digits, "%.9g" style, with negative zero printed as 0.
std::string fmt9(double v);
/// v rounded to 9 significant digits, for JSON records.
double round9(double v);

std::string boundary_csv(const RomBoundary& boundary);
std::string profile_csv(const TorqueProfile& profile);
std::string sweep_csv(const std::vector<SweepReport>& reports);

struct MuscleSummary {
    std::string muscle;
    double baseline_mean = 0.0;   // %MVC
    double condition_mean = 0.0;  // %MVC
    Reduction reduction;
    PairedStats stats;
};
std::string reduction_csv(const std::vector<MuscleSummary>& rows);

nlohmann::json to_json(const ShoulderDesign& d);
nlohmann::json to_json(const TorqueGenConfig& c);
nlohmann::json to_json(const RomReport& r);
nlohmann::json to_json(const TorqueProfile& p);
nlohmann::json to_json(const SweepReport& r);
nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const PairedStats& s);

/// Two-space indented JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

/// Writes bytes verbatim. Throws IoError on failure.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;  // one per header entry
};
/// Header row then numeric rows, comma separated. Throws IoError or UsageError.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(const std::string& text);

}  // namespace exosim
