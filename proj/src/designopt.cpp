#include "exosim/designopt.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "exosim/errors.hpp"
#include "exosim/parallel.hpp"
#include "exosim/romsim.hpp"

namespace exosim {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void TaskRequirement::validate() const {
    if (!(target_angle >= 90.0 && target_angle <= 150.0))
        throw ConfigError("task requirement: target_angle must lie in [90, 150] deg");
    if (!(target_peak_tau > 0.0)) throw ConfigError("task requirement: target_peak_tau must be > 0 N*mm");
    if (!(tolerance_deg > 0.0)) throw ConfigError("task requirement: tolerance_deg must be > 0 deg");
}

FitResult fit_beta_for_pata(const TorqueGenConfig& base, double target, double tol, const FitOptions& opt) {
    base.validate();
    if (!(tol > 0.0)) throw UsageError("fit_beta_for_pata: tol must be > 0 deg");
    auto pata_at = [&](double beta) {
        TorqueGenConfig c = base;
        c.beta = beta;
        return profile(c, opt.profile_step).pata;
    };
    // beta -> PATA decreases, so the high end of the range sits at beta = -30.
    const double p_hi = pata_at(-30.0);
    const double p_lo = pata_at(30.0);
    if (!(target >= p_lo && target <= p_hi))
        throw RangeError("target PATA " + fmt(target) + " deg outside achievable range [" + fmt(p_lo) + ", " +
                         fmt(p_hi) + "] deg");

    double lo = -30.0, hi = 30.0;  // pata(lo) >= target >= pata(hi)
    FitResult r;
    double beta = 0.0, pata = 0.0;
    for (r.iterations = 1; r.iterations <= opt.max_iterations; ++r.iterations) {
        beta = 0.5 * (lo + hi);
        pata = pata_at(beta);
        if (pata > target)
            lo = beta;
        else
            hi = beta;
        if (hi - lo < 1e-6) break;
    }
    r.cfg = base;
    r.cfg.beta = beta;
    const TorqueProfile p = profile(r.cfg, opt.profile_step);
    r.achieved_pata = p.pata;
    r.achieved_peak = p.peak_tau;
    r.converged = std::abs(r.achieved_pata - target) <= tol;
    return r;
}

FitResult fit_li_for_peak(const TorqueGenConfig& base, double target_peak, double tol_rel, const FitOptions& opt) {
    base.validate();
    if (!(tol_rel > 0.0)) throw UsageError("fit_li_for_peak: tol_rel must be > 0");
    if (!(opt.li_max > 0.0)) throw UsageError("fit_li_for_peak: li_max must be > 0 mm");
    auto peak_at = [&](double li) {
        TorqueGenConfig c = base;
        c.L_i = li;
        return profile(c, opt.profile_step).peak_tau;
    };
    const double p_lo = peak_at(0.0);
    const double p_hi = peak_at(opt.li_max);
    if (!(target_peak >= p_lo && target_peak <= p_hi))
        throw RangeError("target peak " + fmt(target_peak) + " N*mm outside achievable range [" + fmt(p_lo) + ", " +
                         fmt(p_hi) + "] N*mm");

    FitResult r;
    r.cfg = base;
    const double current = peak_at(base.L_i);
    if (std::abs(current - target_peak) <= 0.5 * tol_rel * target_peak) {
        r.achieved_peak = current;
        r.achieved_pata = profile(base, opt.profile_step).pata;
        r.converged = true;
        return r;
    }
    double lo = 0.0, hi = opt.li_max;
    double li = base.L_i;
    for (r.iterations = 1; r.iterations <= opt.max_iterations; ++r.iterations) {
        li = 0.5 * (lo + hi);
        if (peak_at(li) < target_peak)
            lo = li;
        else
            hi = li;
        if (hi - lo < 1e-9 * opt.li_max) break;
    }
    r.cfg.L_i = li;
    const TorqueProfile p = profile(r.cfg, opt.profile_step);
    r.achieved_pata = p.pata;
    r.achieved_peak = p.peak_tau;
    r.converged = std::abs(r.achieved_peak - target_peak) <= tol_rel * target_peak;
    return r;
}

ShoulderDesign select_shoulder_params(const std::vector<ShoulderDesign>& candidates, double comfort_db_max,
                                      double grid_step, unsigned workers) {
    if (candidates.empty()) throw UsageError("select_shoulder_params: no candidates");
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < candidates.size(); ++i)
        if (candidates[i].d_b <= comfort_db_max) keep.push_back(i);
    if (keep.empty())
        throw ConstraintError("select_shoulder_params: every candidate has d_b above " + fmt(comfort_db_max) + " mm");

    std::vector<double> area(keep.size());
    parallel_for(keep.size(), workers,
                 [&](std::size_t i) { area[i] = simulate_rom(candidates[keep[i]], grid_step, 1).area; });

    std::size_t best = 0;
    for (std::size_t i = 1; i < keep.size(); ++i) {
        const double tol = 1e-9 * std::max(std::abs(area[i]), std::abs(area[best]));
        if (area[i] > area[best] + tol) {
            best = i;
        } else if (std::abs(area[i] - area[best]) <= tol && candidates[keep[i]].d_b < candidates[keep[best]].d_b) {
            best = i;
        }
    }
    return candidates[keep[best]];
}

}  // namespace exosim
