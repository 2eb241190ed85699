#pragma once

#include <vector>

#include "exosim/kinematics.hpp"

namespace exosim {

struct RomSample {
    double theta_h_user = 0.0;      // deg
    double theta_s_user_max = 0.0;  // deg
};

struct RomBoundary {
    std::vector<RomSample> samples;  // strictly increasing theta_h_user
    ShoulderDesign design;
};

struct RomReport {
    RomBoundary boundary;
    double area = 0.0;            // deg^2
    double max_sagittal = 0.0;    // deg
    double max_horizontal = 0.0;  // deg
    bool empty = false;           // no feasible configuration on the grid
};

enum class SweepOrder { h_outer, s_outer };

/// Sweeps the exoskeleton joint grid, maps each pose to user angles and keeps the
/// largest collision-free sagittal angle per horizontal bin.
/// grid_step in (0, 5] deg; workers = 0 uses machine parallelism.
RomReport simulate_rom(const ShoulderDesign& design, double grid_step = 1.0, unsigned workers = 1,
                       SweepOrder order = SweepOrder::h_outer);

/// Trapezoidal integral of theta_s_user_max over theta_h_user. Needs >= 2 samples.
double rom_area(const RomBoundary& boundary);

/// Reports sorted by descending area, then descending max_sagittal, then input order.
std::vector<RomReport> compare_designs(const std::vector<ShoulderDesign>& designs, double grid_step = 1.0,
                                       unsigned workers = 1);

}  // namespace exosim
