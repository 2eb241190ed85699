#include "exosim/torquegen.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>

#include "exosim/angles.hpp"
#include "exosim/errors.hpp"
#include "exosim/parallel.hpp"

namespace exosim {

const std::vector<std::string> kSweepParams = {"alpha", "beta", "r1", "r2", "r3", "L_i"};

void TorqueGenConfig::validate() const {
    const double vals[] = {alpha, beta, r1, r2, r3, r_p, k_s, L_i, theta_max, tail, datum};
    for (double v : vals)
        if (!std::isfinite(v)) throw ConfigError("torque generator: non-finite parameter");
    if (beta < -30.0 || beta > 30.0) throw ConfigError("torque generator: beta must lie in [-30, 30] deg");
    if (!(r3 > 0.0 && r1 > 0.0 && r2 > 0.0 && r_p > 0.0))
        throw ConfigError("torque generator: r1, r2, r3, r_p must be > 0 mm");
    if (!(r3 < r1 && r1 < r2)) throw ConfigError("torque generator: need r3 < r1 < r2");
    if (!(k_s > 0.0)) throw ConfigError("torque generator: k_s must be > 0 N/mm");
    if (n_springs < 1) throw ConfigError("torque generator: n_springs must be >= 1");
    if (L_i < 0.0) throw ConfigError("torque generator: L_i must be >= 0 mm");
    if (tail < 0.0) throw ConfigError("torque generator: tail must be >= 0 mm");
    if (!(theta_max > 0.0 && theta_max <= 170.0)) throw ConfigError("torque generator: theta_max must lie in (0, 170] deg");
}

namespace {

void check_theta(double theta, const TorqueGenConfig& cfg) {
    if (!(theta >= 0.0)) throw UsageError("torque generator: theta must be >= 0 deg");
    if (theta > cfg.theta_max) throw LimitError("torque generator: theta beyond the safety limit");
}

// Cable length without argument checks; shared by the profile loop.
CableState state_unchecked(double theta, const TorqueGenConfig& cfg) {
    const double g = kPi + deg2rad(theta - cfg.alpha + cfg.datum);
    CableState st;
    st.anchor = {cfg.r1 * std::cos(g), cfg.r1 * std::sin(g)};
    const Circle bar{{0.0, 0.0}, cfg.r3, WrapSense::ccw};
    const Circle pulley{{cfg.r2, -cfg.r2 * std::tan(deg2rad(cfg.beta))}, cfg.r_p, WrapSense::ccw};
    try {
        st.path = route(st.anchor, {bar}, pulley);
    } catch (const GeometryError& e) {
        throw ConfigError(std::string("torque generator: infeasible geometry: ") + e.what());
    }
    // The cable leaves pulley 3 at its point farthest from the joint, heading along the rail.
    st.length = st.path.total_length + terminal_wrap_length(st.path, 0.0) + cfg.tail;
    st.L_exo = moment_arm(st.path, Eigen::Vector2d::Zero());
    st.phase = st.path.engaged[0] ? Phase::I : Phase::II;
    return st;
}

struct Evaluator {
    const TorqueGenConfig& cfg;
    double L_max;

    explicit Evaluator(const TorqueGenConfig& c) : cfg(c), L_max(state_unchecked(c.theta_max, c).length) {}

    struct Point {
        double delta_L, L_exo, tau;
        Phase phase;
    };

    Point at(double theta) const {
        const CableState st = state_unchecked(theta, cfg);
        const double dl = st.length - L_max + cfg.L_i;
        return {dl, st.L_exo, cfg.K() * dl * st.L_exo, st.phase};
    }
};

CriticalAngle bisect_critical(const TorqueGenConfig& cfg) {
    const bool at0 = state_unchecked(0.0, cfg).phase == Phase::I;
    const bool atmax = state_unchecked(cfg.theta_max, cfg).phase == Phase::I;
    if (!at0) return {0.0, false};
    if (atmax) return {cfg.theta_max, false};
    double lo = 0.0, hi = cfg.theta_max;
    for (int i = 0; i < 60 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (state_unchecked(mid, cfg).phase == Phase::I)
            lo = mid;
        else
            hi = mid;
    }
    return {0.5 * (lo + hi), true};
}

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

SignClass classify(double change, double threshold) {
    if (change > threshold) return SignClass::P;
    if (change < -threshold) return SignClass::N;
    return SignClass::NI;
}

}  // namespace

CableState cable_state(double theta, const TorqueGenConfig& cfg) {
    cfg.validate();
    check_theta(theta, cfg);
    return state_unchecked(theta, cfg);
}

double cable_length(double theta, const TorqueGenConfig& cfg) { return cable_state(theta, cfg).length; }

double extension(double theta, const TorqueGenConfig& cfg) {
    cfg.validate();
    check_theta(theta, cfg);
    return Evaluator(cfg).at(theta).delta_L;
}

double torque(double theta, const TorqueGenConfig& cfg) {
    cfg.validate();
    check_theta(theta, cfg);
    return Evaluator(cfg).at(theta).tau;
}

bool bar_engaged(double theta, const TorqueGenConfig& cfg) { return cable_state(theta, cfg).phase == Phase::I; }

CriticalAngle critical_angle(const TorqueGenConfig& cfg) {
    cfg.validate();
    return bisect_critical(cfg);
}

TorqueProfile profile(const TorqueGenConfig& cfg, double step) {
    cfg.validate();
    if (!(step > 0.0 && step <= 1.0)) throw UsageError("profile: step must lie in (0, 1] deg");
    const Evaluator ev(cfg);
    TorqueProfile p;
    const auto n = static_cast<long>(std::floor(cfg.theta_max / step + 1e-9));
    for (long i = 0; i <= n + 1; ++i) {
        double th = static_cast<double>(i) * step;
        if (i == n + 1) {
            if (cfg.theta_max - p.theta.back() <= 1e-9) break;
            th = cfg.theta_max;
        }
        const auto pt = ev.at(th);
        p.theta.push_back(th);
        p.delta_L.push_back(pt.delta_L);
        p.L_exo.push_back(pt.L_exo);
        p.tau.push_back(pt.tau);
        p.phase.push_back(pt.phase);
    }

    const CriticalAngle c = bisect_critical(cfg);
    p.theta_c = c.theta_c;
    p.theta_c_interior = c.interior;

    std::size_t best = p.tau.size();
    for (std::size_t i = 0; i < p.tau.size(); ++i) {
        if (p.phase[i] != Phase::II) continue;
        if (best == p.tau.size() || p.tau[i] > p.tau[best]) best = i;
    }
    if (best == p.tau.size()) {
        // Bar engaged everywhere: no phase II, report the global maximum.
        best = static_cast<std::size_t>(std::max_element(p.tau.begin(), p.tau.end()) - p.tau.begin());
        p.pata = p.theta[best];
        p.peak_tau = p.tau[best];
        return p;
    }
    const double lo = std::max(c.interior ? p.theta_c : 0.0, p.theta[best] - step);
    const double hi = std::min(cfg.theta_max, p.theta[best] + step);
    const auto r = boost::math::tools::brent_find_minima([&](double t) { return -ev.at(t).tau; }, lo, hi, 40);
    if (-r.second >= p.tau[best]) {
        p.pata = r.first;
        p.peak_tau = -r.second;
    } else {
        p.pata = p.theta[best];
        p.peak_tau = p.tau[best];
    }
    return p;
}

double pata_closed_form(const TorqueGenConfig& cfg, double k) {
    if (!(k > 0.0)) throw UsageError("pata_closed_form: k must be > 0");
    if (!(cfg.r2 > 0.0)) throw ConfigError("pata_closed_form: r2 must be > 0 mm");
    const double theta0 = 90.0 - rad2deg(std::atan(cfg.r_p / cfg.r2));
    return theta0 + cfg.alpha - k * cfg.beta;
}

const char* to_string(SignClass s) {
    switch (s) {
        case SignClass::P: return "P";
        case SignClass::N: return "N";
        case SignClass::NI: return "NI";
    }
    return "NI";
}

double get_param(const TorqueGenConfig& cfg, const std::string& name) {
    if (name == "alpha") return cfg.alpha;
    if (name == "beta") return cfg.beta;
    if (name == "r1") return cfg.r1;
    if (name == "r2") return cfg.r2;
    if (name == "r3") return cfg.r3;
    if (name == "L_i") return cfg.L_i;
    if (name == "r_p") return cfg.r_p;
    if (name == "k_s") return cfg.k_s;
    throw UsageError("unknown generator parameter '" + name + "'");
}

void set_param(TorqueGenConfig& cfg, const std::string& name, double value) {
    if (name == "alpha") cfg.alpha = value;
    else if (name == "beta") cfg.beta = value;
    else if (name == "r1") cfg.r1 = value;
    else if (name == "r2") cfg.r2 = value;
    else if (name == "r3") cfg.r3 = value;
    else if (name == "L_i") cfg.L_i = value;
    else if (name == "r_p") cfg.r_p = value;
    else if (name == "k_s") cfg.k_s = value;
    else throw UsageError("unknown generator parameter '" + name + "'");
}

std::vector<double> default_sweep_values(const TorqueGenConfig& cfg, const std::string& param) {
    const double base = get_param(cfg, param);
    double lo = 0.0, hi = 0.0;
    if (param == "alpha" || param == "beta") {
        lo = base - 15.0;
        hi = base + 15.0;
        if (param == "beta") {
            lo = std::max(lo, -30.0);
            hi = std::min(hi, 30.0);
        }
    } else if (param == "r2") {
        lo = base * 0.8;
        hi = base * 1.2;
    } else if (param == "r1" || param == "r3" || param == "L_i") {
        lo = base * 0.75;
        hi = base * 1.25;
    } else {
        throw UsageError("sensitivity: parameter '" + param + "' is not sweepable");
    }
    std::vector<double> v(5);
    for (int i = 0; i < 5; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / 4.0;
    return v;
}

SweepReport sensitivity(const TorqueGenConfig& cfg, const std::string& param, const std::vector<double>& values,
                        unsigned workers, double step, double threshold) {
    cfg.validate();
    if (std::find(kSweepParams.begin(), kSweepParams.end(), param) == kSweepParams.end())
        throw UsageError("sensitivity: parameter '" + param + "' is not sweepable");
    if (values.size() < 2) throw UsageError("sensitivity: need at least 2 values");
    std::vector<TorqueGenConfig> cfgs(values.size(), cfg);
    for (std::size_t i = 0; i < values.size(); ++i) {
        set_param(cfgs[i], param, values[i]);
        cfgs[i].validate();
    }

    SweepReport rep;
    rep.param = param;
    rep.points.resize(values.size());
    parallel_for(values.size(), workers, [&](std::size_t i) {
        const TorqueProfile p = profile(cfgs[i], step);
        SweepPoint& sp = rep.points[i];
        sp.value = values[i];
        sp.pata = p.pata;
        sp.theta_c = p.theta_c;
        sp.peak_tau = p.peak_tau;
        sp.phase1_tau = p.phase.front() == Phase::I ? p.tau.front() : 0.0;
    });

    const double base_peak = profile(cfg, step).peak_tau;
    if (!(base_peak > 0.0)) throw ConfigError("sensitivity: base configuration has no positive peak torque");
    std::vector<double> x, ph1, pk, pa;
    for (const auto& sp : rep.points) {
        x.push_back(sp.value);
        ph1.push_back(sp.phase1_tau);
        pk.push_back(sp.peak_tau);
        pa.push_back(sp.pata);
    }
    const double width = *std::max_element(x.begin(), x.end()) - *std::min_element(x.begin(), x.end());
    rep.change_phase1 = ls_slope(x, ph1) * width / base_peak;
    rep.change_peak = ls_slope(x, pk) * width / base_peak;
    rep.change_pata = ls_slope(x, pa) * width / cfg.theta_max;
    rep.sign_phase1 = classify(rep.change_phase1, threshold);
    rep.sign_peak = classify(rep.change_peak, threshold);
    rep.sign_pata = classify(rep.change_pata, threshold);
    return rep;
}

double fitted_k(const TorqueGenConfig& cfg, unsigned workers) {
    std::vector<double> betas, patas(7);
    for (int b = -30; b <= 30; b += 10) betas.push_back(b);
    parallel_for(betas.size(), workers, [&](std::size_t i) {
        TorqueGenConfig c = cfg;
        c.beta = betas[i];
        patas[i] = profile(c).pata;
    });
    return -ls_slope(betas, patas);
}

}  // namespace exosim
