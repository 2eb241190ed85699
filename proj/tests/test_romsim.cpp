#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exosim/errors.hpp"
#include "exosim/romsim.hpp"
#include "oracles/oracles.hpp"

using namespace exosim;

namespace {

ShoulderDesign make(double phi, double d_v, double d_b) {
    ShoulderDesign d;
    d.phi = phi;
    d.d_v = d_v;
    d.d_b = d_b;
    return d;
}

RomBoundary boundary(std::vector<std::pair<double, double>> pts) {
    RomBoundary b;
    for (auto [h, s] : pts) b.samples.push_back({h, s});
    return b;
}

const std::vector<ShoulderDesign>& seven_sets() {
    static const std::vector<ShoulderDesign> sets = {make(15, 60, 0), make(15, 70, 0),  make(15, 80, 0), make(20, 80, 0),
                                                     make(20, 80, 10), make(15, 80, 10), make(15, 80, 15)};
    return sets;
}

}  // namespace

TEST(RomArea, Rectangle) { EXPECT_DOUBLE_EQ(rom_area(boundary({{0, 90}, {90, 90}})), 8100.0); }

TEST(RomArea, Triangle) { EXPECT_DOUBLE_EQ(rom_area(boundary({{0, 0}, {90, 90}})), 4050.0); }

TEST(RomArea, NeedsTwoSamples) {
    EXPECT_THROW(rom_area(boundary({{0, 10}})), UsageError);
    EXPECT_THROW(rom_area(RomBoundary{}), UsageError);
}

TEST(RomArea, RefinementInvariant) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<double, double>> pts;
        double h = -30.0;
        for (int i = 0; i < 12; ++i) {
            pts.push_back({h, 170.0 * u(rng)});
            h += 0.5 + 20.0 * u(rng);
        }
        std::vector<std::pair<double, double>> fine;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            const int k = 1 + static_cast<int>(u(rng) * 6);
            for (int j = 0; j < k; ++j) {
                const double t = static_cast<double>(j) / k;
                fine.push_back({pts[i].first + t * (pts[i + 1].first - pts[i].first),
                                pts[i].second + t * (pts[i + 1].second - pts[i].second)});
            }
        }
        fine.push_back(pts.back());
        const double a = rom_area(boundary(pts));
        EXPECT_NEAR(rom_area(boundary(fine)), a, 1e-12 * a);
    }
}

TEST(SimulateRom, DegenerateDesignGivesLimitRectangle) {
    ShoulderDesign d = make(0, 0, 0);
    const RomReport r = simulate_rom(d, 1.0);
    ASSERT_FALSE(r.empty);
    ASSERT_EQ(r.boundary.samples.size(), 181u);
    for (std::size_t i = 0; i < r.boundary.samples.size(); ++i) {
        EXPECT_NEAR(r.boundary.samples[i].theta_h_user, -30.0 + static_cast<double>(i), 1e-9);
        EXPECT_NEAR(r.boundary.samples[i].theta_s_user_max, 170.0, 1e-9);
    }
    EXPECT_NEAR(r.area, 180.0 * 170.0, 1e-6);
    EXPECT_NEAR(r.max_sagittal, 170.0, 1e-9);
    EXPECT_NEAR(r.max_horizontal, 150.0, 1e-9);
}

TEST(SimulateRom, ReferenceDesignAdmitsMeasuredElevation) {
    const RomReport r = simulate_rom(make(15, 80, 10), 1.0);
    EXPECT_GE(r.max_sagittal, 160.0);
    EXPECT_LE(r.max_sagittal, 170.0);
    EXPECT_NEAR(r.area, 27626.157, 0.01);
    EXPECT_NEAR(r.max_sagittal, 164.9715, 1e-3);
}

TEST(SimulateRom, AreaIsRecomputable) {
    const RomReport r = simulate_rom(make(20, 80, 10), 2.0);
    EXPECT_DOUBLE_EQ(r.area, rom_area(r.boundary));
    for (std::size_t i = 1; i < r.boundary.samples.size(); ++i)
        EXPECT_LT(r.boundary.samples[i - 1].theta_h_user, r.boundary.samples[i].theta_h_user);
}

TEST(SimulateRom, GridOrientationInvariant) {
    const ShoulderDesign d = make(15, 80, 10);
    const RomReport a = simulate_rom(d, 1.0, 1, SweepOrder::h_outer);
    const RomReport b = simulate_rom(d, 1.0, 1, SweepOrder::s_outer);
    ASSERT_EQ(a.boundary.samples.size(), b.boundary.samples.size());
    for (std::size_t i = 0; i < a.boundary.samples.size(); ++i) {
        EXPECT_EQ(a.boundary.samples[i].theta_h_user, b.boundary.samples[i].theta_h_user);
        EXPECT_EQ(a.boundary.samples[i].theta_s_user_max, b.boundary.samples[i].theta_s_user_max);
    }
}

TEST(SimulateRom, WorkerCountDoesNotChangeResult) {
    const ShoulderDesign d = make(15, 80, 10);
    const RomReport a = simulate_rom(d, 1.0, 1);
    for (unsigned w : {2u, 3u, 8u}) {
        const RomReport b = simulate_rom(d, 1.0, w);
        ASSERT_EQ(a.boundary.samples.size(), b.boundary.samples.size());
        EXPECT_EQ(a.area, b.area);
        for (std::size_t i = 0; i < a.boundary.samples.size(); ++i)
            EXPECT_EQ(a.boundary.samples[i].theta_s_user_max, b.boundary.samples[i].theta_s_user_max);
    }
}

TEST(SimulateRom, GridStepBounds) {
    EXPECT_THROW(simulate_rom(ShoulderDesign{}, 0.0), UsageError);
    EXPECT_THROW(simulate_rom(ShoulderDesign{}, 5.5), UsageError);
}

TEST(SimulateRom, MonotoneInDvAndDb) {
    double prev = 0.0;
    for (double d_v : {60.0, 70.0, 80.0}) {
        const double a = simulate_rom(make(15, d_v, 10), 1.0).area;
        EXPECT_GE(a, prev - 1e-9 * a);
        prev = a;
    }
    const double a0 = simulate_rom(make(15, 80, 0), 1.0).area;
    const double a5 = simulate_rom(make(15, 80, 5), 1.0).area;
    const double a10 = simulate_rom(make(15, 80, 10), 1.0).area;
    EXPECT_NEAR(a0, 27094.41, 0.01);
    EXPECT_NEAR(a5, 27365.80, 0.01);
    EXPECT_NEAR(a10, 27626.16, 0.01);
    EXPECT_LT(a0, a5);
    EXPECT_LT(a5, a10);
}

TEST(SimulateRom, AgreesWithDenseBruteForce) {
    for (const ShoulderDesign& d : seven_sets()) {
        const double a = simulate_rom(d, 1.0, 0).area;
        const oracle::RomScan s = oracle::rom_brute_force(d.phi, d.d_v, d.d_b, d.D_user, d.D_exo, 0.1);
        EXPECT_NEAR(a, s.area, 0.02 * s.area) << "phi " << d.phi << " d_v " << d.d_v << " d_b " << d.d_b;
    }
}

TEST(CompareDesigns, Singleton) {
    const auto r = compare_designs({make(15, 80, 10)}, 2.0);
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].boundary.design.d_b, 10.0);
}

TEST(CompareDesigns, LargerDbRanksFirst) {
    const auto r = compare_designs({make(15, 80, 0), make(15, 80, 10)}, 1.0);
    EXPECT_EQ(r[0].boundary.design.d_b, 10.0);
    EXPECT_GE(r[0].area, r[1].area);
}

TEST(CompareDesigns, DvTieKeepsInputOrder) {
    const auto r = compare_designs({make(15, 60, 10), make(15, 80, 10)}, 1.0);
    EXPECT_EQ(r[0].area, r[1].area);
    EXPECT_EQ(r[0].boundary.design.d_v, 60.0);
    const auto s = compare_designs({make(15, 80, 10), make(15, 60, 10)}, 1.0);
    EXPECT_EQ(s[0].boundary.design.d_v, 80.0);
}

TEST(CompareDesigns, SortedByArea) {
    const auto r = compare_designs(seven_sets(), 1.0, 0);
    ASSERT_EQ(r.size(), 7u);
    for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(r[i - 1].area, r[i].area);
    EXPECT_EQ(r[0].boundary.design.d_b, 15.0);
}
