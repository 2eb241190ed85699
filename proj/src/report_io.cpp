#include "exosim/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "exosim/errors.hpp"

namespace exosim {

std::string fmt9(double v) {
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

double round9(double v) {
    if (!std::isfinite(v)) return v;
    return std::strtod(fmt9(v).c_str(), nullptr);
}

std::string boundary_csv(const RomBoundary& b) {
    std::string out = "theta_h_user_deg,theta_s_user_max_deg\n";
    for (const auto& s : b.samples) out += fmt9(s.theta_h_user) + "," + fmt9(s.theta_s_user_max) + "\n";
    return out;
}

std::string profile_csv(const TorqueProfile& p) {
    std::string out = "theta_deg,delta_L_mm,L_exo_mm,tau_Nmm,tau_Nm,phase\n";
    for (std::size_t i = 0; i < p.theta.size(); ++i) {
        out += fmt9(p.theta[i]) + "," + fmt9(p.delta_L[i]) + "," + fmt9(p.L_exo[i]) + "," + fmt9(p.tau[i]) + "," +
               fmt9(p.tau[i] / 1000.0) + "," + (p.phase[i] == Phase::I ? "I" : "II") + "\n";
    }
    return out;
}

std::string sweep_csv(const std::vector<SweepReport>& reports) {
    std::string out = "param,phase1_tau_sign,peak_tau_sign,pata_sign,phase1_tau_change,peak_tau_change,pata_change\n";
    for (const auto& r : reports)
        out += r.param + "," + to_string(r.sign_phase1) + "," + to_string(r.sign_peak) + "," + to_string(r.sign_pata) +
               "," + fmt9(r.change_phase1) + "," + fmt9(r.change_peak) + "," + fmt9(r.change_pata) + "\n";
    return out;
}

std::string reduction_csv(const std::vector<MuscleSummary>& rows) {
    std::string out =
        "muscle,baseline_pct_mvc,condition_pct_mvc,abs_reduction_pts,rel_reduction_pct,test,p_value,significant\n";
    for (const auto& r : rows)
        out += r.muscle + "," + fmt9(r.baseline_mean) + "," + fmt9(r.condition_mean) + "," +
               fmt9(r.reduction.absolute) + "," + fmt9(r.reduction.relative) + "," + to_string(r.stats.test_used) +
               "," + fmt9(r.stats.p_value) + "," + (r.stats.significant ? "yes" : "no") + "\n";
    return out;
}

nlohmann::json to_json(const ShoulderDesign& d) {
    return {{"phi_deg", round9(d.phi)},
            {"d_v_mm", round9(d.d_v)},
            {"d_b_mm", round9(d.d_b)},
            {"D_user_mm", round9(d.D_user)},
            {"D_exo_mm", round9(d.D_exo)},
            {"theta_s_exo_max_deg", round9(d.theta_s_exo_max)},
            {"theta_h_exo_min_deg", round9(d.theta_h_exo_min)},
            {"theta_h_exo_max_deg", round9(d.theta_h_exo_max)}};
}

nlohmann::json to_json(const TorqueGenConfig& c) {
    return {{"alpha_deg", round9(c.alpha)}, {"beta_deg", round9(c.beta)},   {"r1_mm", round9(c.r1)},
            {"r2_mm", round9(c.r2)},        {"r3_mm", round9(c.r3)},        {"r_p_mm", round9(c.r_p)},
            {"k_s_N_per_mm", round9(c.k_s)}, {"n_springs", c.n_springs},    {"L_i_mm", round9(c.L_i)},
            {"theta_max_deg", round9(c.theta_max)}, {"tail_mm", round9(c.tail)}, {"datum_deg", round9(c.datum)}};
}

nlohmann::json to_json(const RomReport& r) {
    return {{"design", to_json(r.boundary.design)},
            {"area_deg2", round9(r.area)},
            {"max_sagittal_deg", round9(r.max_sagittal)},
            {"max_horizontal_deg", round9(r.max_horizontal)},
            {"samples", r.boundary.samples.size()},
            {"empty", r.empty}};
}

nlohmann::json to_json(const TorqueProfile& p) {
    return {{"pata_deg", round9(p.pata)},
            {"peak_tau_Nmm", round9(p.peak_tau)},
            {"peak_tau_Nm", round9(p.peak_tau / 1000.0)},
            {"theta_c_deg", round9(p.theta_c)},
            {"theta_c_interior", p.theta_c_interior},
            {"samples", p.theta.size()}};
}

nlohmann::json to_json(const SweepReport& r) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& sp : r.points)
        pts.push_back({{"value", round9(sp.value)},
                       {"pata_deg", round9(sp.pata)},
                       {"theta_c_deg", round9(sp.theta_c)},
                       {"peak_tau_Nmm", round9(sp.peak_tau)},
                       {"phase1_tau_Nmm", round9(sp.phase1_tau)}});
    return {{"param", r.param},
            {"points", pts},
            {"change", {{"phase1_tau", round9(r.change_phase1)}, {"peak_tau", round9(r.change_peak)}, {"pata", round9(r.change_pata)}}},
            {"sign", {{"phase1_tau", to_string(r.sign_phase1)}, {"peak_tau", to_string(r.sign_peak)}, {"pata", to_string(r.sign_pata)}}}};
}

nlohmann::json to_json(const FitResult& r) {
    return {{"generator", to_json(r.cfg)},
            {"achieved_pata_deg", round9(r.achieved_pata)},
            {"achieved_peak_Nmm", round9(r.achieved_peak)},
            {"iterations", r.iterations},
            {"converged", r.converged}};
}

nlohmann::json to_json(const PairedStats& s) {
    return {{"n", s.n},
            {"normality_p", round9(s.normality_p)},
            {"test_used", to_string(s.test_used)},
            {"statistic", round9(s.statistic)},
            {"p_value", round9(s.p_value)},
            {"significant", s.significant}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    for (auto& s : out) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    }
    return out;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    CsvTable t;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (t.header.empty()) {
            t.header = cells;
            t.columns.resize(cells.size());
            continue;
        }
        if (cells.size() != t.header.size())
            throw UsageError("csv line " + std::to_string(lineno) + ": expected " + std::to_string(t.header.size()) +
                             " fields");
        for (std::size_t i = 0; i < cells.size(); ++i) {
            char* end = nullptr;
            const double v = std::strtod(cells[i].c_str(), &end);
            if (cells[i].empty() || *end != '\0')
                throw UsageError("csv line " + std::to_string(lineno) + ": non-numeric field '" + cells[i] + "'");
            t.columns[i].push_back(v);
        }
    }
    if (t.header.empty()) throw UsageError("csv: missing header row");
    return t;
}

CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

}  // namespace exosim
