#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exosim/errors.hpp"
#include "exosim/kinematics.hpp"
#include "oracles/oracles.hpp"

using namespace exosim;

namespace {

void expect_vec(const Eigen::Vector3d& v, double x, double y, double z, double tol) {
    EXPECT_NEAR(v.x(), x, tol);
    EXPECT_NEAR(v.y(), y, tol);
    EXPECT_NEAR(v.z(), z, tol);
}

ShoulderDesign degenerate() {
    ShoulderDesign d;
    d.phi = 0.0;
    d.d_v = 0.0;
    d.d_b = 0.0;
    d.D_exo = d.D_user = 300.0;
    return d;
}

}  // namespace

TEST(DhTransform, ZeroRowIsIdentity) {
    const Pose p = dh_transform(DhRow::fixed(0, 0, 0, 0));
    EXPECT_TRUE(p.rotation.isApprox(Eigen::Matrix3d::Identity(), 1e-15));
    EXPECT_EQ(p.position.norm(), 0.0);
}

TEST(DhTransform, ThetaRotatesAboutZ) {
    const Pose p = dh_transform(DhRow::fixed(0, 0, 0, 90));
    expect_vec(p.apply({1, 0, 0}), 0, 1, 0, 1e-12);
}

TEST(DhTransform, AlphaRotatesAboutX) {
    const Pose p = dh_transform(DhRow::fixed(-90, 0, 0, 0));
    expect_vec(p.apply({0, 1, 0}), 0, 0, -1, 1e-12);
}

TEST(DhTransform, JointValueRules) {
    EXPECT_THROW(dh_transform(DhRow::fixed(0, 0, 0, 0), 1.0), UsageError);
    EXPECT_THROW(dh_transform(DhRow::revolute(0, 0, 0, 0)), UsageError);
    EXPECT_THROW(dh_transform(DhRow::prismatic(0, 0, 0, 0)), UsageError);
    const Pose p = dh_transform(DhRow::prismatic(0, 0, 5, 0), 7.0);
    expect_vec(p.position, 0, 0, 12, 1e-12);
}

TEST(DhTransform, MatchesElementaryProduct) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(-180, 180), len(-50, 50);
    for (int i = 0; i < 200; ++i) {
        const double al = ang(rng), a = len(rng), d = len(rng), th = ang(rng);
        const Pose p = dh_transform(DhRow::fixed(al, a, d, th));
        const oracle::Mat4 m = oracle::dh(al, a, d, th);
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) EXPECT_NEAR(p.rotation(r, c), m[r][c], 1e-12);
            EXPECT_NEAR(p.position(r), m[r][3], 1e-10);
        }
    }
}

TEST(DhRow, AnglesAreWrapped) {
    EXPECT_DOUBLE_EQ(DhRow::fixed(270, 0, 0, -190).alpha_prev, -90.0);
    EXPECT_DOUBLE_EQ(DhRow::fixed(0, 0, 0, -190).theta, 170.0);
    EXPECT_DOUBLE_EQ(DhRow::fixed(-180, 0, 0, 0).alpha_prev, 180.0);
    EXPECT_THROW(DhRow::fixed(0, NAN, 0, 0), UsageError);
}

TEST(DhChain, JointCountMustMatchNames) {
    EXPECT_THROW(DhChain({DhRow::revolute(0, 0, 0, 0)}, {}), UsageError);
    const DhChain c({DhRow::revolute(0, 0, 0, 0), DhRow::fixed(0, 10, 0, 0)}, {"q"});
    const double q[] = {90.0};
    expect_vec(c.forward(q).position, 0, 10, 0, 1e-12);
    const double wrong[] = {1.0, 2.0};
    EXPECT_THROW(c.forward(wrong), UsageError);
}

TEST(Pose, StaysProperUnderManyCompositions) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> ang(-180, 180), len(-10, 10);
    Pose acc;
    for (int i = 0; i < 10000; ++i) acc = acc * dh_transform(DhRow::fixed(ang(rng), len(rng), len(rng), ang(rng)));
    EXPECT_TRUE(acc.is_proper(1e-6));
}

TEST(Pose, CompositionIsAssociative) {
    const Pose a = dh_transform(DhRow::fixed(30, 5, 2, 40));
    const Pose b = dh_transform(DhRow::fixed(-60, 1, 7, 10));
    const Pose c = dh_transform(DhRow::fixed(90, -3, 0, -120));
    const Pose l = (a * b) * c, r = a * (b * c);
    EXPECT_TRUE(l.rotation.isApprox(r.rotation, 1e-12));
    EXPECT_TRUE(l.position.isApprox(r.position, 1e-12));
}

TEST(FkUser, ReferencePoints) {
    expect_vec(fk_user(0, 0, 300), 0, 0, 300, 1e-9);
    expect_vec(fk_user(0, 90, 300), 0, 300, 0, 1e-9);
}

TEST(FkUser, MatchesOracleAndKeepsRadius) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> h(-180, 180), s(0, 180);
    for (int i = 0; i < 500; ++i) {
        const double th = h(rng), ts = s(rng);
        const Eigen::Vector3d p = fk_user(th, ts, 300.0);
        const oracle::Vec3 m = oracle::fk_user(th, ts, 300.0);
        const oracle::Vec3 c = oracle::fk_user_closed(th, ts, 300.0);
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(p(k), m[static_cast<std::size_t>(k)], 1e-9);
            EXPECT_NEAR(p(k), c[static_cast<std::size_t>(k)], 1e-9);
        }
        EXPECT_NEAR(p.norm(), 300.0, 300.0 * 1e-9);
    }
}

TEST(FkExo, FrozenReferencePoints) {
    ShoulderDesign d;
    expect_vec(fk_exo(0, 90, d), 2.2498e-14, 249.8076211353316, 150.0, 1e-9);
    expect_vec(fk_exo(37, 121, d), -173.55051893888898, 233.8637769255809, -20.265134582154523, 1e-9);
    ShoulderDesign e;
    e.phi = 10.0;
    e.d_v = 60.0;
    e.d_b = 5.0;
    e.D_exo = 280.0;
    expect_vec(fk_exo(-20, 45, e), 54.92891459132314, 103.79480736739012, 252.0843196863137, 1e-9);
}

TEST(FkExo, MatchesMatrixOracle) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> h(-30, 150), s(0, 170), phi(0, 20), dv(0, 100), db(0, 15);
    for (int i = 0; i < 300; ++i) {
        ShoulderDesign d;
        d.phi = phi(rng);
        d.d_v = dv(rng);
        d.d_b = db(rng);
        const double th = h(rng), ts = s(rng);
        const Eigen::Vector3d p = fk_exo(th, ts, d);
        const oracle::Vec3 m = oracle::fk_exo(th, ts, d.phi, d.d_v, d.d_b, d.D_exo);
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(p(k), m[static_cast<std::size_t>(k)], 1e-9);
    }
}

TEST(FkExo, DegenerateDesignEqualsUser) {
    const ShoulderDesign d = degenerate();
    for (double h = -30; h <= 150; h += 7.5)
        for (double s = 0; s <= 170; s += 8.5) EXPECT_LE((fk_exo(h, s, d) - fk_user(h, s, 300.0)).norm(), 1e-9);
}

TEST(FkExo, SafetyLimit) {
    ShoulderDesign d;
    EXPECT_THROW(fk_exo(0, 175, d), LimitError);
    EXPECT_NO_THROW(fk_exo(0, 170, d));
}

TEST(ShoulderDesign, Validation) {
    ShoulderDesign d;
    EXPECT_NO_THROW(d.validate());
    d.d_v = -1;
    EXPECT_THROW(d.validate(), ConfigError);
    d = ShoulderDesign{};
    d.theta_s_exo_max = 175;
    EXPECT_THROW(d.validate(), ConfigError);
    d = ShoulderDesign{};
    d.D_user = 0;
    EXPECT_THROW(d.validate(), ConfigError);
}

TEST(IkUser, Roundtrip) {
    const UserAngles a = ik_user(fk_user(30, 75, 300), 300);
    EXPECT_NEAR(a.theta_h, 30.0, 1e-9);
    EXPECT_NEAR(a.theta_s, 75.0, 1e-9);
    EXPECT_FALSE(a.singular);
}

TEST(IkUser, RandomRoundtrips) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> h(-179, 179), s(0.1, 179.9);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double th = h(rng), ts = s(rng);
        const UserAngles a = ik_user(fk_user(th, ts, 300), 300);
        worst = std::max({worst, std::abs(a.theta_h - th), std::abs(a.theta_s - ts)});
    }
    EXPECT_LT(worst, 1e-7);
}

TEST(IkUser, SingularRayAndDirectionOnly) {
    const UserAngles a = ik_user({0, 0, 123}, 300);
    EXPECT_TRUE(a.singular);
    EXPECT_EQ(a.theta_h, 0.0);
    EXPECT_EQ(a.theta_s, 0.0);
    const UserAngles b = ik_user({0, 0, -5}, 300);
    EXPECT_TRUE(b.singular);
    EXPECT_DOUBLE_EQ(b.theta_s, 180.0);
    const UserAngles c = ik_user(fk_user(-40, 100, 300) * 0.37, 300);
    EXPECT_NEAR(c.theta_h, -40.0, 1e-9);
    EXPECT_NEAR(c.theta_s, 100.0, 1e-9);
}

TEST(IkUser, Errors) {
    EXPECT_THROW(ik_user({0, 0, 0}, 300), DegenerateError);
    EXPECT_THROW(ik_user({1, 0, 0}, 0), ConfigError);
}
