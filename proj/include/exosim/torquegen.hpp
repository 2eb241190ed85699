#pragma once

#include <string>
#include <vector>

#include "exosim/cable.hpp"

namespace exosim {

/// Torque generator parameters. Defaults are the reference prototype values.
/// Angles in degrees, lengths in mm, stiffness in N/mm.
struct TorqueGenConfig {
    double alpha = 40.0;  // pulley-2 mounting angle
    double beta = 0.0;    // pulley-3 rail angle, [-30, 30]
    double r1 = 20.0;     // pulley-2 centre distance from the joint
    double r2 = 40.0;     // rail distance from the joint
    double r3 = 3.0;      // joint-bar radius
    double r_p = 7.0;     // pulley-3 radius
    double k_s = 12.0;    // single spring stiffness
    int n_springs = 3;
    double L_i = 30.0;        // initial pretension extension
    double theta_max = 170.0;  // safety limit
    double tail = 0.0;         // constant pulley-3 -> spring run
    double datum = -2.08;      // angular offset of the alpha scale

    double K() const { return n_springs * k_s; }
    /// Throws ConfigError on broken invariants.
    void validate() const;
};

enum class Phase { I, II };

struct CableState {
    CablePath path;
    Eigen::Vector2d anchor = Eigen::Vector2d::Zero();
    double length = 0.0;  // mm, anchor to spring including the pulley-3 wrap and tail
    double L_exo = 0.0;   // mm
    Phase phase = Phase::II;
};

/// Full cable geometry at joint angle theta (deg).
CableState cable_state(double theta, const TorqueGenConfig& cfg);
double cable_length(double theta, const TorqueGenConfig& cfg);
/// Delta L = L(theta) - L(theta_max) + L_i.
double extension(double theta, const TorqueGenConfig& cfg);
/// tau = K * Delta L * L_exo in N*mm.
double torque(double theta, const TorqueGenConfig& cfg);
/// True while the cable wraps the joint bar.
bool bar_engaged(double theta, const TorqueGenConfig& cfg);

struct TorqueProfile {
    std::vector<double> theta;
    std::vector<double> delta_L;
    std::vector<double> L_exo;
    std::vector<double> tau;
    std::vector<Phase> phase;
    double theta_c = 0.0;
    bool theta_c_interior = true;  // false when no switch happens inside [0, theta_max]
    double pata = 0.0;
    double peak_tau = 0.0;
};

/// Samples [0, theta_max] with the given step (0, 1] deg.
TorqueProfile profile(const TorqueGenConfig& cfg, double step = 0.1);

/// theta_0 + alpha - k*beta with theta_0 = 90 - atan(r_p / r2), degrees.
double pata_closed_form(const TorqueGenConfig& cfg, double k);

struct CriticalAngle {
    double theta_c = 0.0;
    bool interior = true;
};
/// Bisection on bar engagement; boundary value with interior = false when the phase never switches.
CriticalAngle critical_angle(const TorqueGenConfig& cfg);

enum class SignClass { P, N, NI };
const char* to_string(SignClass s);

struct SweepPoint {
    double value = 0.0;
    double pata = 0.0;
    double theta_c = 0.0;
    double peak_tau = 0.0;
    double phase1_tau = 0.0;  // tau(0) while the bar is engaged there, else 0
};

struct SweepReport {
    std::string param;
    std::vector<SweepPoint> points;
    double change_phase1 = 0.0;  // fraction of the base peak torque
    double change_peak = 0.0;    // fraction of the base peak torque
    double change_pata = 0.0;    // fraction of theta_max
    SignClass sign_phase1 = SignClass::NI;
    SignClass sign_peak = SignClass::NI;
    SignClass sign_pata = SignClass::NI;
};

inline constexpr double kSignThreshold = 0.05;
extern const std::vector<std::string> kSweepParams;

/// Returns the parameter value by name; throws UsageError for unknown names.
double get_param(const TorqueGenConfig& cfg, const std::string& name);
void set_param(TorqueGenConfig& cfg, const std::string& name, double value);

/// Five evenly spaced values around the base: angles +-15 deg (beta clipped to +-30),
/// r2 +-20 %, other lengths +-25 %.
std::vector<double> default_sweep_values(const TorqueGenConfig& cfg, const std::string& param);

/// Profiles every value and classifies the trend of (phase-I tau, peak tau, PATA).
/// Change = least-squares slope * sweep width / scale, with scale the base peak
/// torque for torque metrics and theta_max for PATA; |change| < threshold is NI.
SweepReport sensitivity(const TorqueGenConfig& cfg, const std::string& param, const std::vector<double>& values,
                        unsigned workers = 1, double step = 0.1, double threshold = kSignThreshold);

/// Least-squares k in PATA = c - k*beta over beta = -30..30 step 10.
double fitted_k(const TorqueGenConfig& cfg, unsigned workers = 1);

}  // namespace exosim
