#pragma once

#include <vector>

#include "exosim/kinematics.hpp"
#include "exosim/torquegen.hpp"

namespace exosim {

struct TaskRequirement {
    double target_angle = 120.0;       // deg, [90, 150]
    double target_peak_tau = 30000.0;  // N*mm
    double tolerance_deg = 0.5;

    void validate() const;
};

struct FitResult {
    TorqueGenConfig cfg;
    double achieved_pata = 0.0;  // deg
    double achieved_peak = 0.0;  // N*mm
    int iterations = 0;
    bool converged = false;
};

struct FitOptions {
    double li_max = 100.0;  // mm, L_i search ceiling
    int max_iterations = 60;
    double profile_step = 0.1;  // deg
};

/// Bisection over beta in [-30, 30] on the decreasing beta -> PATA map.
/// Throws RangeError naming the achievable interval when target lies outside it.
FitResult fit_beta_for_pata(const TorqueGenConfig& base, double target, double tol = 0.5,
                            const FitOptions& opt = {});

/// Bisection over L_i in [0, li_max] on the increasing L_i -> peak torque map.
FitResult fit_li_for_peak(const TorqueGenConfig& base, double target_peak, double tol_rel = 0.01,
                          const FitOptions& opt = {});

/// Largest ROM area among candidates with d_b <= comfort_db_max; ties go to the smaller d_b,
/// then to the earlier candidate. Throws ConstraintError when every candidate is filtered out.
ShoulderDesign select_shoulder_params(const std::vector<ShoulderDesign>& candidates, double comfort_db_max,
                                      double grid_step = 1.0, unsigned workers = 1);

}  // namespace exosim
