#include "exosim/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <nlohmann/json.hpp>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "exosim/designopt.hpp"
#include "exosim/errors.hpp"
#include "exosim/evalpipe.hpp"
#include "exosim/parallel.hpp"
#include "exosim/report_io.hpp"
#include "exosim/romsim.hpp"
#include "exosim/torquegen.hpp"

namespace exosim {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct NumParam {
    std::string key;
    std::string help;
    std::function<void(double)> set;
    std::optional<double> flag;
};

// Numeric settings shared by the config file (flat keys) and the command line (--key).
class ParamSet {
public:
    void add(std::string key, std::string help, std::function<void(double)> set) {
        params_.push_back({std::move(key), std::move(help), std::move(set), std::nullopt});
    }

    void register_flags(CLI::App* app) {
        for (auto& p : params_) app->add_option("--" + p.key, p.flag, p.help);
    }

    bool apply_config(const std::string& key, const json& v) {
        for (auto& p : params_) {
            if (p.key != key) continue;
            if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
            p.set(v.get<double>());
            return true;
        }
        return false;
    }

    void apply_flags() {
        for (auto& p : params_)
            if (p.flag) p.set(*p.flag);
    }

private:
    std::deque<NumParam> params_;
};

int as_count(double v, const std::string& what) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) throw ConfigError(what + " must be a non-negative integer");
    return static_cast<int>(v);
}

void add_design_params(ParamSet& ps, ShoulderDesign& d, double& grid_step) {
    ps.add("phi", "Shoulder-structure tilt phi [deg]", [&](double v) { d.phi = v; });
    ps.add("d_v", "Vertical offset d_v [mm]", [&](double v) { d.d_v = v; });
    ps.add("d_b", "Backward offset d_b [mm]", [&](double v) { d.d_b = v; });
    ps.add("D_user", "User shoulder-to-sleeve distance [mm]", [&](double v) { d.D_user = v; });
    ps.add("D_exo", "Exoskeleton shoulder-to-sleeve distance [mm]", [&](double v) { d.D_exo = v; });
    ps.add("theta_s_exo_max", "Exoskeleton sagittal joint limit, at most 170 [deg]",
           [&](double v) { d.theta_s_exo_max = v; });
    ps.add("theta_h_exo_min", "Exoskeleton horizontal joint lower limit [deg]", [&](double v) { d.theta_h_exo_min = v; });
    ps.add("theta_h_exo_max", "Exoskeleton horizontal joint upper limit [deg]", [&](double v) { d.theta_h_exo_max = v; });
    ps.add("grid_step", "Joint grid step, in (0, 5] [deg]", [&](double v) { grid_step = v; });
}

void add_generator_params(ParamSet& ps, TorqueGenConfig& c) {
    ps.add("alpha", "Pulley-2 mounting angle [deg]", [&](double v) { c.alpha = v; });
    ps.add("beta", "Pulley-3 rail angle, in [-30, 30] [deg]", [&](double v) { c.beta = v; });
    ps.add("r1", "Pulley-2 distance from the joint [mm]", [&](double v) { c.r1 = v; });
    ps.add("r2", "Rail distance from the joint [mm]", [&](double v) { c.r2 = v; });
    ps.add("r3", "Joint-bar radius [mm]", [&](double v) { c.r3 = v; });
    ps.add("r_p", "Pulley-3 radius [mm]", [&](double v) { c.r_p = v; });
    ps.add("k_s", "Single spring stiffness [N/mm]", [&](double v) { c.k_s = v; });
    ps.add("n_springs", "Number of parallel springs [count]", [&](double v) { c.n_springs = as_count(v, "n_springs"); });
    ps.add("L_i", "Initial spring extension [mm]", [&](double v) { c.L_i = v; });
    ps.add("theta_max", "Sagittal safety limit, at most 170 [deg]", [&](double v) { c.theta_max = v; });
    ps.add("tail", "Constant cable length after pulley 3 [mm]", [&](double v) { c.tail = v; });
    ps.add("datum", "Angular datum of the alpha scale [deg]", [&](double v) { c.datum = v; });
}

struct Common {
    std::string config_path;
    std::optional<std::string> out;
    std::optional<unsigned> workers;
};

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config '" + path + "': top level must be an object");
    return j;
}

struct Context {
    fs::path out_dir;
    unsigned workers = 0;
    std::ostream& log;

    void write(const std::string& name, const std::string& content) const {
        const fs::path p = out_dir / name;
        write_file(p.string(), content);
        log << "wrote " << p.string() << "\n";
    }
};

// Applies the command's config keys; returns the remaining common settings.
void apply_config(const json& cfg, ParamSet& ps, const std::set<std::string>& extra,
                  const std::function<void(const std::string&, const json&)>& on_extra, std::string& out_cfg,
                  std::optional<double>& workers_cfg) {
    for (const auto& [key, val] : cfg.items()) {
        if (key == "out") {
            if (!val.is_string()) throw ConfigError("config key 'out' must be a string");
            out_cfg = val.get<std::string>();
        } else if (key == "workers") {
            if (!val.is_number()) throw ConfigError("config key 'workers' must be a number");
            workers_cfg = val.get<double>();
        } else if (ps.apply_config(key, val)) {
        } else if (extra.count(key)) {
            on_extra(key, val);
        } else {
            throw ConfigError("config: unknown key '" + key + "' for this command");
        }
    }
}

Context make_context(const Common& common, const std::string& out_cfg, const std::optional<double>& workers_cfg,
                     std::ostream& log) {
    std::string dir = "exosim_out";
    if (!out_cfg.empty()) dir = out_cfg;
    if (const char* env = std::getenv("EXOSIM_OUT"); env && *env) dir = env;
    if (common.out) dir = *common.out;
    unsigned workers = 0;
    if (workers_cfg) workers = static_cast<unsigned>(as_count(*workers_cfg, "workers"));
    if (common.workers) workers = *common.workers;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
    return Context{dir, workers, log};
}

std::string str_value(const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<std::string> str_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of strings");
    std::vector<std::string> out;
    for (const auto& e : v) out.push_back(str_value(e, key));
    return out;
}

std::vector<double> num_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError("config key '" + key + "' must be an array of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

// ---------------------------------------------------------------- rom

std::vector<ShoulderDesign> paper7(const ShoulderDesign& base) {
    const double sets[7][3] = {{15, 60, 0}, {15, 70, 0}, {15, 80, 0}, {20, 80, 0},
                               {20, 80, 10}, {15, 80, 10}, {15, 80, 15}};
    std::vector<ShoulderDesign> out;
    for (const auto& s : sets) {
        ShoulderDesign d = base;
        d.phi = s[0];
        d.d_v = s[1];
        d.d_b = s[2];
        out.push_back(d);
    }
    return out;
}

struct RomCmd {
    ShoulderDesign design;
    double grid_step = 1.0;
    std::optional<std::string> preset;
    double comfort_db_max = 10.0;
    ParamSet ps;

    void setup(CLI::App* sub) {
        add_design_params(ps, design, grid_step);
        ps.add("comfort_db_max", "Largest comfortable d_b when selecting from a preset [mm]",
               [&](double v) { comfort_db_max = v; });
        ps.register_flags(sub);
        sub->add_option("--preset", preset, "Named design set; 'paper7' runs the seven reference sets");
    }

    void run(const Common& common, std::ostream& log) {
        std::string out_cfg;
        std::optional<double> workers_cfg;
        std::optional<std::string> preset_cfg;
        apply_config(load_config(common.config_path), ps, {"preset"},
                     [&](const std::string& k, const json& v) { preset_cfg = str_value(v, k); }, out_cfg, workers_cfg);
        ps.apply_flags();
        if (!preset && preset_cfg) preset = preset_cfg;
        design.validate();
        if (!(grid_step > 0.0 && grid_step <= 5.0)) throw ConfigError("grid_step must lie in (0, 5] deg");
        const Context ctx = make_context(common, out_cfg, workers_cfg, log);

        if (!preset) {
            const RomReport r = simulate_rom(design, grid_step, ctx.workers);
            ctx.write("rom_boundary.csv", boundary_csv(r.boundary));
            ctx.write("rom_report.json", dump(to_json(r)));
            log << "area " << fmt9(r.area) << " deg^2, max sagittal " << fmt9(r.max_sagittal) << " deg\n";
            return;
        }
        if (*preset != "paper7") throw UsageError("unknown preset '" + *preset + "' (known: paper7)");
        const auto designs = paper7(design);
        std::vector<RomReport> reports(designs.size());
        parallel_for(designs.size(), ctx.workers,
                     [&](std::size_t i) { reports[i] = simulate_rom(designs[i], grid_step, 1); });
        json sets = json::array();
        for (std::size_t i = 0; i < designs.size(); ++i) {
            ctx.write("rom_boundary_set" + std::to_string(i + 1) + ".csv", boundary_csv(reports[i].boundary));
            json j = to_json(reports[i]);
            j["set"] = i + 1;
            sets.push_back(j);
        }
        const auto ranked = compare_designs(designs, grid_step, ctx.workers);
        json ranking = json::array();
        for (const auto& r : ranked)
            for (std::size_t i = 0; i < designs.size(); ++i)
                if (r.boundary.design.phi == designs[i].phi && r.boundary.design.d_v == designs[i].d_v &&
                    r.boundary.design.d_b == designs[i].d_b) {
                    ranking.push_back(i + 1);
                    break;
                }
        const ShoulderDesign chosen = select_shoulder_params(designs, comfort_db_max, grid_step, ctx.workers);
        json summary = {{"sets", sets},
                        {"ranking_by_area", ranking},
                        {"comfort_db_max_mm", round9(comfort_db_max)},
                        {"selected", to_json(chosen)}};
        ctx.write("rom_compare.json", dump(summary));
        log << "selected phi " << fmt9(chosen.phi) << " deg, d_v " << fmt9(chosen.d_v) << " mm, d_b "
            << fmt9(chosen.d_b) << " mm\n";
    }
};

// ---------------------------------------------------------------- torque

struct TorqueCmd {
    TorqueGenConfig cfg;
    double step = 0.1;
    ParamSet ps;

    void setup(CLI::App* sub) {
        add_generator_params(ps, cfg);
        ps.add("step", "Profile sampling step, in (0, 1] [deg]", [&](double v) { step = v; });
        ps.register_flags(sub);
    }

    void run(const Common& common, std::ostream& log) {
        std::string out_cfg;
        std::optional<double> workers_cfg;
        apply_config(load_config(common.config_path), ps, {}, nullptr, out_cfg, workers_cfg);
        ps.apply_flags();
        cfg.validate();
        if (!(step > 0.0 && step <= 1.0)) throw ConfigError("step must lie in (0, 1] deg");
        const Context ctx = make_context(common, out_cfg, workers_cfg, log);
        const TorqueProfile p = profile(cfg, step);
        json j = to_json(p);
        j["generator"] = to_json(cfg);
        j["K_N_per_mm"] = round9(cfg.K());
        j["pata_closed_form_k1_deg"] = round9(pata_closed_form(cfg, 1.0));
        TorqueGenConfig at0 = cfg;
        at0.beta = 0.0;
        j["fitted_k"] = round9(fitted_k(at0, ctx.workers));
        ctx.write("torque_profile.csv", profile_csv(p));
        ctx.write("torque_summary.json", dump(j));
        log << "PATA " << fmt9(p.pata) << " deg, peak " << fmt9(p.peak_tau / 1000.0) << " N*m, theta_c "
            << fmt9(p.theta_c) << " deg\n";
    }
};

// ---------------------------------------------------------------- sweep

struct SweepCmd {
    TorqueGenConfig cfg;
    double step = 0.1;
    std::string param = "all";
    std::vector<double> values;
    double threshold = kSignThreshold;
    ParamSet ps;

    void setup(CLI::App* sub) {
        add_generator_params(ps, cfg);
        ps.add("step", "Profile sampling step, in (0, 1] [deg]", [&](double v) { step = v; });
        ps.add("threshold", "Relative change below which a trend is NI [fraction]", [&](double v) { threshold = v; });
        ps.register_flags(sub);
        sub->add_option("--param", param, "Parameter to sweep: alpha|beta|r1|r2|r3|L_i|all (default all)");
        sub->add_option("--values", values, "Sweep values in the parameter's unit (deg or mm); single --param only");
    }

    void run(const Common& common, std::ostream& log) {
        std::string out_cfg;
        std::optional<double> workers_cfg;
        std::optional<std::string> param_cfg;
        std::vector<double> values_cfg;
        apply_config(load_config(common.config_path), ps, {"param", "values"},
                     [&](const std::string& k, const json& v) {
                         if (k == "param") param_cfg = str_value(v, k);
                         else values_cfg = num_list(v, k);
                     },
                     out_cfg, workers_cfg);
        ps.apply_flags();
        if (param == "all" && param_cfg) param = *param_cfg;
        if (values.empty()) values = values_cfg;
        cfg.validate();
        if (!(step > 0.0 && step <= 1.0)) throw ConfigError("step must lie in (0, 1] deg");
        std::vector<std::string> params;
        if (param == "all") {
            if (!values.empty()) throw UsageError("--values needs a single --param");
            params = kSweepParams;
        } else {
            params = {param};
        }
        const Context ctx = make_context(common, out_cfg, workers_cfg, log);
        std::vector<SweepReport> reports;
        json arr = json::array();
        for (const auto& name : params) {
            const auto v = values.empty() ? default_sweep_values(cfg, name) : values;
            reports.push_back(sensitivity(cfg, name, v, ctx.workers, step, threshold));
            arr.push_back(to_json(reports.back()));
            log << name << ": " << to_string(reports.back().sign_phase1) << " " << to_string(reports.back().sign_peak)
                << " " << to_string(reports.back().sign_pata) << "\n";
        }
        ctx.write("sweep_signs.csv", sweep_csv(reports));
        ctx.write("sweep.json", dump({{"generator", to_json(cfg)}, {"threshold", round9(threshold)}, {"sweeps", arr}}));
    }
};

// ---------------------------------------------------------------- fit

struct FitCmd {
    TorqueGenConfig cfg;
    std::optional<double> pata, peak;
    double tol = 0.5, tol_rel = 0.01;
    FitOptions opt;
    ParamSet ps;

    void setup(CLI::App* sub) {
        add_generator_params(ps, cfg);
        ps.add("pata", "Target peak-assistive-torque angle [deg]", [&](double v) { pata = v; });
        ps.add("peak", "Target peak torque [N*mm]", [&](double v) { peak = v; });
        ps.add("tol", "PATA tolerance [deg]", [&](double v) { tol = v; });
        ps.add("tol_rel", "Peak torque tolerance [fraction]", [&](double v) { tol_rel = v; });
        ps.add("li_max", "Upper bound of the L_i search [mm]", [&](double v) { opt.li_max = v; });
        ps.add("step", "Profile sampling step, in (0, 1] [deg]", [&](double v) { opt.profile_step = v; });
        ps.register_flags(sub);
    }

    void run(const Common& common, std::ostream& log) {
        std::string out_cfg;
        std::optional<double> workers_cfg;
        apply_config(load_config(common.config_path), ps, {}, nullptr, out_cfg, workers_cfg);
        ps.apply_flags();
        cfg.validate();
        if (!pata && !peak) throw UsageError("fit needs --pata and/or --peak");
        if (!(opt.profile_step > 0.0 && opt.profile_step <= 1.0)) throw ConfigError("step must lie in (0, 1] deg");
        const Context ctx = make_context(common, out_cfg, workers_cfg, log);
        json j = json::object();
        TorqueGenConfig cur = cfg;
        if (pata) {
            const FitResult r = fit_beta_for_pata(cur, *pata, tol, opt);
            j["pata_fit"] = to_json(r);
            j["pata_fit"]["target_deg"] = round9(*pata);
            cur = r.cfg;
            log << "beta " << fmt9(r.cfg.beta) << " deg gives PATA " << fmt9(r.achieved_pata) << " deg\n";
        }
        if (peak) {
            const FitResult r = fit_li_for_peak(cur, *peak, tol_rel, opt);
            j["peak_fit"] = to_json(r);
            j["peak_fit"]["target_Nmm"] = round9(*peak);
            cur = r.cfg;
            log << "L_i " << fmt9(r.cfg.L_i) << " mm gives peak " << fmt9(r.achieved_peak) << " N*mm\n";
        }
        j["generator"] = to_json(cur);
        ctx.write("fit.json", dump(j));
    }
};

// ---------------------------------------------------------------- emg

struct Recording {
    std::map<std::string, EmgTrace> channels;
    std::optional<AccelTrace> accel;
};

double rate_from_time(const std::vector<double>& t, const std::string& path) {
    if (t.size() < 2) throw UsageError("'" + path + "': need at least 2 samples");
    const double span = t.back() - t.front();
    if (!(span > 0.0)) throw UsageError("'" + path + "': time column must increase");
    return static_cast<double>(t.size() - 1) / span;
}

Recording load_recording(const std::string& emg_path, const std::string& accel_path) {
    Recording rec;
    const CsvTable emg = read_csv(emg_path);
    if (emg.header.size() < 2) throw UsageError("'" + emg_path + "': need a time column and at least one channel");
    const double rate = rate_from_time(emg.columns[0], emg_path);
    for (std::size_t i = 1; i < emg.header.size(); ++i) {
        EmgTrace t;
        t.samples = emg.columns[i];
        t.rate = rate;
        t.label = emg.header[i];
        rec.channels[emg.header[i]] = std::move(t);
    }
    if (!accel_path.empty()) {
        const CsvTable acc = read_csv(accel_path);
        if (acc.header.size() != 4) throw UsageError("'" + accel_path + "': expected time and three axis columns");
        AccelTrace a;
        a.rate = rate_from_time(acc.columns[0], accel_path);
        for (int k = 0; k < 3; ++k) a.axes[static_cast<std::size_t>(k)] = acc.columns[static_cast<std::size_t>(k) + 1];
        rec.accel = std::move(a);
    }
    return rec;
}

struct EmgCmd {
    std::vector<std::string> baseline, condition, baseline_accel, condition_accel, muscles, mvc_flags;
    std::map<std::string, double> mvc;
    double threshold = 0.01;
    double window_ms = kActivityWindowMs;
    std::string summary = "mean";
    bool synthetic = false;
    double subjects = 10;
    double seed = 1;
    double reduction = 0.45;
    ParamSet ps;

    void setup(CLI::App* sub) {
        ps.add("threshold", "Acceleration variance threshold for task segmentation [g^2]",
               [&](double v) { threshold = v; });
        ps.add("window_ms", "RMS window length [ms]", [&](double v) { window_ms = v; });
        ps.add("subjects", "Synthetic subjects [count]", [&](double v) { subjects = v; });
        ps.add("seed", "Synthetic data seed [integer]", [&](double v) { seed = v; });
        ps.add("reduction", "Synthetic mean activation reduction of the condition [fraction]",
               [&](double v) { reduction = v; });
        ps.register_flags(sub);
        sub->add_option("--baseline", baseline, "Baseline trial CSVs: time [s] then EMG channels [mV]");
        sub->add_option("--condition", condition, "Condition trial CSVs, paired with --baseline by position");
        sub->add_option("--baseline_accel", baseline_accel, "Accelerometer CSVs for baseline trials: time [s], x, y, z [g]");
        sub->add_option("--condition_accel", condition_accel, "Accelerometer CSVs for condition trials [g]");
        sub->add_option("--muscles", muscles, "Channel names to analyse (default: every channel)");
        sub->add_option("--mvc", mvc_flags, "MVC amplitude per muscle as NAME=VALUE [mV]");
        sub->add_option("--summary", summary, "Trial RMS summary: mean|max");
        sub->add_flag("--synthetic", synthetic, "Generate deterministic synthetic trials instead of reading CSVs");
    }

    void run(const Common& common, std::ostream& log) {
        std::string out_cfg;
        std::optional<double> workers_cfg;
        const std::set<std::string> extra = {"baseline", "condition", "baseline_accel", "condition_accel",
                                             "muscles", "mvc", "summary", "synthetic"};
        std::map<std::string, json> ex;
        apply_config(load_config(common.config_path), ps, extra,
                     [&](const std::string& k, const json& v) { ex[k] = v; }, out_cfg, workers_cfg);
        ps.apply_flags();
        auto fill = [&](std::vector<std::string>& dst, const char* key) {
            if (dst.empty() && ex.count(key)) dst = str_list(ex[key], key);
        };
        fill(baseline, "baseline");
        fill(condition, "condition");
        fill(baseline_accel, "baseline_accel");
        fill(condition_accel, "condition_accel");
        fill(muscles, "muscles");
        if (ex.count("summary") && summary == "mean") summary = str_value(ex["summary"], "summary");
        if (ex.count("synthetic")) {
            if (!ex["synthetic"].is_boolean()) throw ConfigError("config key 'synthetic' must be a boolean");
            synthetic = synthetic || ex["synthetic"].get<bool>();
        }
        if (ex.count("mvc")) {
            if (!ex["mvc"].is_object()) throw ConfigError("config key 'mvc' must map muscle names to numbers");
            for (const auto& [k, v] : ex["mvc"].items()) {
                if (!v.is_number()) throw ConfigError("config key 'mvc' must map muscle names to numbers");
                mvc[k] = v.get<double>();
            }
        }
        for (const auto& s : mvc_flags) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw UsageError("--mvc expects NAME=VALUE, got '" + s + "'");
            char* end = nullptr;
            const std::string num = s.substr(eq + 1);
            const double v = std::strtod(num.c_str(), &end);
            if (num.empty() || *end != '\0') throw UsageError("--mvc value for '" + s.substr(0, eq) + "' is not a number");
            mvc[s.substr(0, eq)] = v;
        }
        if (summary != "mean" && summary != "max") throw UsageError("--summary must be mean or max");
        const RmsSummary mode = summary == "max" ? RmsSummary::max : RmsSummary::mean;

        const Context ctx = make_context(common, out_cfg, workers_cfg, log);
        std::vector<Recording> base_recs, cond_recs;
        if (synthetic) {
            make_synthetic(base_recs, cond_recs);
        } else {
            if (baseline.empty()) throw UsageError("emg needs --baseline and --condition CSVs, or --synthetic");
            if (baseline.size() != condition.size())
                throw UsageError("--baseline and --condition must list the same number of trials");
            if (!baseline_accel.empty() && baseline_accel.size() != baseline.size())
                throw UsageError("--baseline_accel must match --baseline in count");
            if (!condition_accel.empty() && condition_accel.size() != condition.size())
                throw UsageError("--condition_accel must match --condition in count");
            for (std::size_t i = 0; i < baseline.size(); ++i) {
                base_recs.push_back(load_recording(baseline[i], baseline_accel.empty() ? "" : baseline_accel[i]));
                cond_recs.push_back(load_recording(condition[i], condition_accel.empty() ? "" : condition_accel[i]));
            }
        }
        if (muscles.empty())
            for (const auto& [name, _] : base_recs.front().channels) muscles.push_back(name);
        for (const auto& m : muscles)
            if (!mvc.count(m)) throw UsageError("no MVC value for muscle '" + m + "' (use --mvc " + m + "=VALUE)");

        const std::size_t nt = base_recs.size();
        const std::size_t nm = muscles.size();
        std::vector<double> base_rms(nt * nm), cond_rms(nt * nm);
        parallel_for(2 * nt * nm, ctx.workers, [&](std::size_t k) {
            const bool is_cond = k >= nt * nm;
            const std::size_t idx = k % (nt * nm);
            const Recording& rec = (is_cond ? cond_recs : base_recs)[idx / nm];
            const std::string& m = muscles[idx % nm];
            const auto it = rec.channels.find(m);
            if (it == rec.channels.end()) throw UsageError("trial lacks channel '" + m + "'");
            const EmgTrace env = preprocess_emg(it->second, mvc.at(m));
            double start = 0.0, end = -1.0;
            if (rec.accel) {
                const Segment1D seg = segment_activity(*rec.accel, threshold);
                start = seg.start;
                end = seg.end;
            }
            (is_cond ? cond_rms : base_rms)[idx] = rms_windows(env, window_ms, start, end, mode).summary;
        });

        std::vector<MuscleSummary> rows;
        json stats = json::object();
        for (std::size_t j = 0; j < nm; ++j) {
            std::vector<double> b(nt), c(nt);
            for (std::size_t i = 0; i < nt; ++i) {
                b[i] = base_rms[i * nm + j];
                c[i] = cond_rms[i * nm + j];
            }
            MuscleSummary row;
            row.muscle = muscles[j];
            row.baseline_mean = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(nt);
            row.condition_mean = std::accumulate(c.begin(), c.end(), 0.0) / static_cast<double>(nt);
            row.reduction = reduction_table({row.baseline_mean}, {row.condition_mean}).front();
            row.stats = paired_compare(b, c);
            json bj = json::array(), cj = json::array();
            for (std::size_t i = 0; i < nt; ++i) {
                bj.push_back(round9(b[i]));
                cj.push_back(round9(c[i]));
            }
            stats[row.muscle] = {{"stats", to_json(row.stats)},
                                 {"baseline_rms_pct_mvc", bj},
                                 {"condition_rms_pct_mvc", cj},
                                 {"abs_reduction_pts", round9(row.reduction.absolute)},
                                 {"rel_reduction_pct", round9(row.reduction.relative)}};
            log << row.muscle << ": " << fmt9(row.reduction.absolute) << " pts, " << fmt9(row.reduction.relative)
                << " %, " << to_string(row.stats.test_used) << " p=" << fmt9(row.stats.p_value) << "\n";
            rows.push_back(row);
        }
        ctx.write("emg_reduction.csv", reduction_csv(rows));
        ctx.write("emg_stats.json", dump(stats));
    }

    void make_synthetic(std::vector<Recording>& base_recs, std::vector<Recording>& cond_recs) {
        const int n = as_count(subjects, "subjects");
        if (n < 3 || n > 50) throw UsageError("subjects must lie in [3, 50]");
        if (!(reduction > -1.0 && reduction < 1.0)) throw UsageError("reduction must lie in (-1, 1)");
        const auto s0 = static_cast<std::uint64_t>(as_count(seed, "seed"));
        if (muscles.empty()) muscles = {"AD", "MD", "PD", "UT"};
        for (const auto& m : muscles)
            if (!mvc.count(m)) mvc[m] = 2.0;
        NormalStream subject_noise(s0);
        for (int s = 0; s < n; ++s) {
            Recording b, c;
            for (std::size_t j = 0; j < muscles.size(); ++j) {
                const double amp = 1.0 + 0.15 * subject_noise.next();
                const double ratio = 1.0 - reduction + 0.05 * subject_noise.next();
                SyntheticSpec spec;
                spec.emg_amplitude = std::max(0.05, amp);
                const std::uint64_t key = s0 * 1000003ULL + static_cast<std::uint64_t>(s) * 1009ULL + j * 17ULL;
                SyntheticTrial tb = synthetic_trial(spec, key);
                spec.emg_amplitude = std::max(0.05, amp * ratio);
                SyntheticTrial tc = synthetic_trial(spec, key + 7ULL);
                tb.emg.label = tc.emg.label = muscles[j];
                b.channels[muscles[j]] = std::move(tb.emg);
                c.channels[muscles[j]] = std::move(tc.emg);
                if (j == 0) {
                    b.accel = std::move(tb.accel);
                    c.accel = std::move(tc.accel);
                }
            }
            base_recs.push_back(std::move(b));
            cond_recs.push_back(std::move(c));
        }
    }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"exosim: shoulder exoskeleton kinematics, torque generator and EMG analysis.\n"
                 "Units: angles in deg, lengths in mm, stiffness in N/mm, torque in N*mm (CSV adds N*m)."};
    app.require_subcommand(1);
    app.fallthrough();
    Common common;
    app.add_option("--config", common.config_path, "JSON config file with flat keys named like the flags");
    app.add_option("--out", common.out, "Output directory (overrides EXOSIM_OUT and the config; default exosim_out)");
    app.add_option("--workers", common.workers, "Worker threads [count] (default: machine parallelism)");

    RomCmd rom;
    TorqueCmd tq;
    SweepCmd sw;
    FitCmd fit;
    EmgCmd emg;
    CLI::App* rom_app = app.add_subcommand("rom", "Wearer range of motion for a shoulder design");
    CLI::App* tq_app = app.add_subcommand("torque", "Torque profile of the generator (reference values by default)");
    CLI::App* sw_app = app.add_subcommand("sweep", "Sensitivity sweeps and the P/N/NI sign matrix");
    CLI::App* fit_app = app.add_subcommand("fit", "Fit beta to a target PATA and/or L_i to a target peak torque");
    CLI::App* emg_app = app.add_subcommand("emg", "EMG envelope, RMS, paired statistics and reduction table");
    rom.setup(rom_app);
    tq.setup(tq_app);
    sw.setup(sw_app);
    fit.setup(fit_app);
    emg.setup(emg_app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "exosim: error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (rom_app->parsed()) rom.run(common, out);
        else if (tq_app->parsed()) tq.run(common, out);
        else if (sw_app->parsed()) sw.run(common, out);
        else if (fit_app->parsed()) fit.run(common, out);
        else if (emg_app->parsed()) emg.run(common, out);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "exosim: error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "exosim: error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "exosim: error: config: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "exosim: error: " << e.what() << "\n";
        return kExitDomain;
    }
}

}  // namespace exosim
