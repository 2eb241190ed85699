#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace exosim {

/// One row of a modified (preceding-link) DH table.
/// Angles in degrees, lengths in mm. A revolute row adds the joint value to
/// theta_offset; a prismatic row adds it to d.
struct DhRow {
    double alpha_prev = 0.0;
    double a_prev = 0.0;
    double d = 0.0;
    double theta = 0.0;
    bool theta_is_joint = false;
    bool d_is_joint = false;
    double theta_offset = 0.0;

    static DhRow fixed(double alpha_prev, double a_prev, double d, double theta);
    static DhRow revolute(double alpha_prev, double a_prev, double d, double theta_offset);
    static DhRow prismatic(double alpha_prev, double a_prev, double d_offset, double theta);

    bool is_joint() const { return theta_is_joint || d_is_joint; }
};

/// Rigid transform: x' = rotation * x + position.
struct Pose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d position = Eigen::Vector3d::Zero();

    static Pose identity() { return {}; }
    Pose operator*(const Pose& rhs) const;
    Eigen::Vector3d apply(const Eigen::Vector3d& x) const { return rotation * x + position; }
    /// Orthonormal with det +1 to the given tolerance.
    bool is_proper(double tol = 1e-9) const;
};

/// T = RotX(alpha_prev) * TransX(a_prev) * RotZ(theta) * TransZ(d).
/// Throws UsageError when a joint value is given for a fixed row or missing for a joint row.
Pose dh_transform(const DhRow& row, std::optional<double> joint_value = std::nullopt);

struct DhChain {
    std::vector<DhRow> rows;
    std::vector<std::string> joint_names;

    DhChain() = default;
    DhChain(std::vector<DhRow> rows, std::vector<std::string> joint_names);

    std::size_t joint_count() const { return joint_names.size(); }
    /// Base-to-tip pose; joint_values are consumed in row order.
    Pose forward(std::span<const double> joint_values) const;
};

struct ShoulderDesign {
    double phi = 15.0;             // deg
    double d_v = 80.0;             // mm
    double d_b = 10.0;             // mm
    double D_user = 300.0;         // mm
    double D_exo = 300.0;          // mm
    double theta_s_exo_max = 170.0;  // deg
    double theta_h_exo_min = -30.0;  // deg
    double theta_h_exo_max = 150.0;  // deg

    /// Throws ConfigError on broken invariants.
    void validate() const;
};

/// User shoulder: horizontal then sagittal revolute joint, then the arm to the sleeve.
DhChain user_chain(double D_user);
/// Exoskeleton shoulder structure with offsets phi, d_v, d_b.
DhChain exo_chain(const ShoulderDesign& design);

/// Arm-sleeve position for user angles (deg); norm equals D_user.
Eigen::Vector3d fk_user(double theta_h, double theta_s, double D_user);
/// Arm-sleeve position for exoskeleton angles (deg) in the CSU frame.
/// Throws LimitError when theta_s exceeds design.theta_s_exo_max.
Eigen::Vector3d fk_exo(double theta_h, double theta_s, const ShoulderDesign& design);

struct UserAngles {
    double theta_h = 0.0;  // deg, (-180, 180]
    double theta_s = 0.0;  // deg, [0, 180]
    bool singular = false;  // theta_s at 0 or 180; theta_h reported as 0
};

/// Direction-only inverse of fk_user; the radius of p is not required to equal D_user.
/// Throws DegenerateError for p = 0 and ConfigError for D_user <= 0.
UserAngles ik_user(const Eigen::Vector3d& p, double D_user);

}  // namespace exosim
