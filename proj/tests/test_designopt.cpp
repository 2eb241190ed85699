#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exosim/designopt.hpp"
#include "exosim/errors.hpp"

using namespace exosim;

namespace {

ShoulderDesign make(double phi, double d_v, double d_b) {
    ShoulderDesign d;
    d.phi = phi;
    d.d_v = d_v;
    d.d_b = d_b;
    return d;
}

std::vector<ShoulderDesign> seven_sets() {
    return {make(15, 60, 0), make(15, 70, 0), make(15, 80, 0), make(20, 80, 0),
            make(20, 80, 10), make(15, 80, 10), make(15, 80, 15)};
}

}  // namespace

TEST(FitBeta, ReferenceTarget) {
    const FitResult r = fit_beta_for_pata(TorqueGenConfig{}, 120.0);
    EXPECT_TRUE(r.converged);
    EXPECT_LT(std::abs(r.cfg.beta), 3.0);
    EXPECT_NEAR(r.cfg.beta, 2.9299, 0.05);
    EXPECT_LE(std::abs(r.achieved_pata - 120.0), 0.5);
}

TEST(FitBeta, OutOfRangeNamesInterval) {
    try {
        fit_beta_for_pata(TorqueGenConfig{}, 80.0);
        FAIL() << "expected RangeError";
    } catch (const RangeError& e) {
        const std::string m = e.what();
        EXPECT_NE(m.find("94.2"), std::string::npos) << m;
        EXPECT_NE(m.find("145.9"), std::string::npos) << m;
    }
    EXPECT_THROW(fit_beta_for_pata(TorqueGenConfig{}, 160.0), RangeError);
}

TEST(FitBeta, ClosedLoop) {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(95.0, 145.0);
    FitOptions opt;
    opt.profile_step = 0.1;
    for (int i = 0; i < 50; ++i) {
        const double target = u(rng);
        const FitResult r = fit_beta_for_pata(TorqueGenConfig{}, target, 0.5, opt);
        ASSERT_TRUE(r.converged);
        EXPECT_LE(std::abs(profile(r.cfg, opt.profile_step).pata - target), 0.5) << "target " << target;
    }
}

TEST(FitBeta, Idempotent) {
    const FitResult a = fit_beta_for_pata(TorqueGenConfig{}, 130.0);
    const FitResult b = fit_beta_for_pata(a.cfg, 130.0);
    EXPECT_LE(std::abs(b.achieved_pata - a.achieved_pata), 0.5);
    EXPECT_LE(std::abs(profile(b.cfg, 0.1).pata - 130.0), 0.5);
}

TEST(FitLi, FixedPoint) {
    const TorqueGenConfig c;
    const double peak = profile(c, 0.1).peak_tau;
    const FitResult r = fit_li_for_peak(c, peak);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(std::abs(r.achieved_peak - peak), 0.01 * peak);
    EXPECT_NEAR(r.cfg.L_i, c.L_i, 1.0);
}

TEST(FitLi, DoublingRaisesPretension) {
    const TorqueGenConfig c;
    const double peak = profile(c, 0.1).peak_tau;
    const FitResult r = fit_li_for_peak(c, 2.0 * peak);
    EXPECT_TRUE(r.converged);
    EXPECT_GT(r.cfg.L_i, c.L_i);
}

TEST(FitLi, ClosedLoop) {
    const TorqueGenConfig c;
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(15000.0, 60000.0);
    for (int i = 0; i < 20; ++i) {
        const double target = u(rng);
        const FitResult r = fit_li_for_peak(c, target);
        ASSERT_TRUE(r.converged);
        EXPECT_LE(std::abs(profile(r.cfg, 0.1).peak_tau - target), 0.01 * target) << "target " << target;
    }
}

TEST(FitLi, Unreachable) {
    EXPECT_THROW(fit_li_for_peak(TorqueGenConfig{}, 1e9), RangeError);
    EXPECT_THROW(fit_li_for_peak(TorqueGenConfig{}, 1.0), RangeError);
}

TEST(TaskRequirement, Validation) {
    TaskRequirement t;
    EXPECT_NO_THROW(t.validate());
    t.target_angle = 80.0;
    EXPECT_THROW(t.validate(), ConfigError);
    t = TaskRequirement{};
    t.target_peak_tau = 0.0;
    EXPECT_THROW(t.validate(), ConfigError);
}

TEST(SelectShoulder, SevenSets) {
    const ShoulderDesign d = select_shoulder_params(seven_sets(), 10.0, 1.0, 0);
    EXPECT_EQ(d.phi, 15.0);
    EXPECT_EQ(d.d_v, 80.0);
    EXPECT_EQ(d.d_b, 10.0);
}

TEST(SelectShoulder, SingleCandidate) {
    const ShoulderDesign d = select_shoulder_params({make(12, 50, 3)}, 10.0, 2.0);
    EXPECT_EQ(d.phi, 12.0);
    EXPECT_EQ(d.d_v, 50.0);
    EXPECT_EQ(d.d_b, 3.0);
}

TEST(SelectShoulder, ComfortFilter) {
    const ShoulderDesign d = select_shoulder_params(seven_sets(), 0.0, 1.0, 0);
    EXPECT_EQ(d.d_b, 0.0);
    EXPECT_THROW(select_shoulder_params({make(15, 80, 10), make(15, 80, 15)}, 5.0, 2.0), ConstraintError);
    EXPECT_THROW(select_shoulder_params({}, 5.0), UsageError);
}
