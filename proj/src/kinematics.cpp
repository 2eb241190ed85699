#include "exosim/kinematics.hpp"

#include <Eigen/Geometry>
#include <cmath>

#include "exosim/angles.hpp"
#include "exosim/errors.hpp"

namespace exosim {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw UsageError(std::string("DH row: non-finite ") + what);
}

DhRow make_row(double alpha_prev, double a_prev, double d, double theta, bool theta_joint, bool d_joint,
               double theta_offset) {
    require_finite(alpha_prev, "alpha");
    require_finite(a_prev, "a");
    require_finite(d, "d");
    require_finite(theta, "theta");
    require_finite(theta_offset, "theta offset");
    DhRow r;
    r.alpha_prev = wrap_deg(alpha_prev);
    r.a_prev = a_prev;
    r.d = d;
    r.theta = wrap_deg(theta);
    r.theta_is_joint = theta_joint;
    r.d_is_joint = d_joint;
    r.theta_offset = wrap_deg(theta_offset);
    return r;
}

}  // namespace

DhRow DhRow::fixed(double alpha_prev, double a_prev, double d, double theta) {
    return make_row(alpha_prev, a_prev, d, theta, false, false, 0.0);
}

DhRow DhRow::revolute(double alpha_prev, double a_prev, double d, double theta_offset) {
    return make_row(alpha_prev, a_prev, d, 0.0, true, false, theta_offset);
}

DhRow DhRow::prismatic(double alpha_prev, double a_prev, double d_offset, double theta) {
    return make_row(alpha_prev, a_prev, d_offset, theta, false, true, 0.0);
}

Pose Pose::operator*(const Pose& rhs) const {
    Pose out;
    out.rotation = rotation * rhs.rotation;
    out.position = rotation * rhs.position + position;
    return out;
}

bool Pose::is_proper(double tol) const {
    const Eigen::Matrix3d gram = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
    return gram.cwiseAbs().maxCoeff() <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Pose dh_transform(const DhRow& row, std::optional<double> joint_value) {
    if (row.is_joint() && !joint_value) throw UsageError("dh_transform: joint row needs a joint value");
    if (!row.is_joint() && joint_value) throw UsageError("dh_transform: fixed row takes no joint value");
    if (row.theta_is_joint && row.d_is_joint) throw UsageError("dh_transform: row has two joint flags");

    double theta = row.theta;
    double d = row.d;
    if (row.theta_is_joint) theta = row.theta_offset + *joint_value;
    if (row.d_is_joint) d = row.d + *joint_value;

    const double ca = std::cos(deg2rad(row.alpha_prev));
    const double sa = std::sin(deg2rad(row.alpha_prev));
    const double ct = std::cos(deg2rad(theta));
    const double st = std::sin(deg2rad(theta));

    // RotX(a) * TransX(a_prev) * RotZ(t) * TransZ(d), multiplied out.
    Pose p;
    p.rotation << ct, -st, 0.0,
                  st * ca, ct * ca, -sa,
                  st * sa, ct * sa, ca;
    p.position << row.a_prev, -sa * d, ca * d;
    return p;
}

DhChain::DhChain(std::vector<DhRow> r, std::vector<std::string> names)
    : rows(std::move(r)), joint_names(std::move(names)) {
    std::size_t joints = 0;
    for (const auto& row : rows) {
        if (row.theta_is_joint && row.d_is_joint) throw UsageError("DhChain: row has two joint flags");
        if (row.is_joint()) ++joints;
    }
    if (joints != joint_names.size()) throw UsageError("DhChain: joint rows and joint names differ in count");
}

Pose DhChain::forward(std::span<const double> q) const {
    if (q.size() != joint_names.size()) throw UsageError("DhChain::forward: wrong number of joint values");
    Pose T;
    std::size_t k = 0;
    for (const auto& row : rows) {
        T = T * dh_transform(row, row.is_joint() ? std::optional<double>(q[k++]) : std::nullopt);
    }
    return T;
}

void ShoulderDesign::validate() const {
    auto fin = [](double v) { return std::isfinite(v); };
    if (!fin(phi) || !fin(d_v) || !fin(d_b) || !fin(D_user) || !fin(D_exo) || !fin(theta_s_exo_max) ||
        !fin(theta_h_exo_min) || !fin(theta_h_exo_max))
        throw ConfigError("shoulder design: non-finite parameter");
    if (d_v < 0.0) throw ConfigError("shoulder design: d_v must be >= 0 mm");
    if (d_b < 0.0) throw ConfigError("shoulder design: d_b must be >= 0 mm");
    if (D_user <= 0.0) throw ConfigError("shoulder design: D_user must be > 0 mm");
    if (D_exo <= 0.0) throw ConfigError("shoulder design: D_exo must be > 0 mm");
    if (!(theta_s_exo_max > 0.0 && theta_s_exo_max <= 170.0))
        throw ConfigError("shoulder design: theta_s_exo_max must lie in (0, 170] deg");
    if (!(theta_h_exo_min < theta_h_exo_max))
        throw ConfigError("shoulder design: empty horizontal joint range");
}

DhChain user_chain(double D_user) {
    return DhChain({DhRow::revolute(0, 0, 0, 90), DhRow::revolute(-90, 0, 0, -90), DhRow::fixed(0, D_user, 0, 0)},
                   {"theta_h", "theta_s"});
}

DhChain exo_chain(const ShoulderDesign& s) {
    return DhChain({DhRow::fixed(90, 0, s.d_b, 0),
                    DhRow::fixed(-90 + s.phi, 0, s.d_v, 0),
                    DhRow::revolute(0, 0, 0, 90),
                    DhRow::fixed(0, 0, -s.d_v, 0),
                    DhRow::revolute(-90, 0, 0, -s.phi - 90),
                    DhRow::fixed(0, s.D_exo, 0, 0)},
                   {"theta_h", "theta_s"});
}

Eigen::Vector3d fk_user(double theta_h, double theta_s, double D_user) {
    const double q[2] = {theta_h, theta_s};
    return user_chain(D_user).forward(q).position;
}

Eigen::Vector3d fk_exo(double theta_h, double theta_s, const ShoulderDesign& design) {
    if (theta_s > design.theta_s_exo_max)
        throw LimitError("fk_exo: theta_s " + std::to_string(theta_s) + " deg exceeds limit " +
                         std::to_string(design.theta_s_exo_max) + " deg");
    const double q[2] = {theta_h, theta_s};
    return exo_chain(design).forward(q).position;
}

UserAngles ik_user(const Eigen::Vector3d& p, double D_user) {
    if (!(D_user > 0.0)) throw ConfigError("ik_user: D_user must be > 0 mm");
    const double n = p.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw DegenerateError("ik_user: zero or non-finite target");
    const double rho = std::hypot(p.x(), p.y());
    UserAngles out;
    out.theta_s = rad2deg(std::atan2(rho, p.z()));
    if (rho <= 1e-12 * n) {
        out.singular = true;
        out.theta_h = 0.0;
    } else {
        out.theta_h = wrap_deg(rad2deg(std::atan2(-p.x(), p.y())));
    }
    return out;
}

}  // namespace exosim
