#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "exosim/errors.hpp"
#include "exosim/stats.hpp"
#include "oracles/oracles.hpp"

using namespace exosim;

namespace {

const std::vector<double> kDiffs = {1.5, -0.5, 2.5, 3.0, -1.0, 4.0, 2.0, 0.5, 3.5, 1.0, 2.25};

const std::vector<double> kBig = {2.340919, -2.255665, 0.718099, -0.26777,  -0.152649, 0.084403, -1.719986, 0.068068,
                                  -0.565213, 3.623,     0.525787, -0.052631, 0.018713,  -0.368046, -0.755151, -0.090801,
                                  0.781945,  0.061446,  1.257759, 0.100198,  0.32426,   1.845821, 0.845106,  -0.205229,
                                  0.117161,  0.840525,  2.235088, 0.03038,   0.056441,  1.302314};

}  // namespace

TEST(ShapiroWilk, ReferenceValues) {
    const ShapiroWilk a = shapiro_wilk({0.12, -0.31, 0.45, 0.08, -0.02, 0.27, 0.33, -0.15, 0.51, 0.04});
    EXPECT_NEAR(a.w, 0.9762877650911517, 1e-6);
    EXPECT_NEAR(a.p, 0.9422587646991002, 1e-4);
    const ShapiroWilk b = shapiro_wilk({1, 2, 3, 4, 5, 6, 7, 8, 9, 30});
    EXPECT_NEAR(b.w, 0.6698890078433926, 1e-6);
    EXPECT_NEAR(b.p, 0.0003809682833082067, 1e-6);
    const ShapiroWilk c = shapiro_wilk({2.1, 3.4, 1.9, 5.6, 4.4, 3.3, 2.8});
    EXPECT_NEAR(c.w, 0.9401366781979513, 1e-6);
    EXPECT_NEAR(c.p, 0.6399513746153818, 1e-4);
}

TEST(ShapiroWilk, LocationScaleInvariant) {
    std::vector<double> x = {0.3, 1.7, -0.4, 2.2, 0.9, 1.1, -1.3, 0.05, 0.6};
    const ShapiroWilk a = shapiro_wilk(x);
    for (double& v : x) v = 7.0 + 3.5 * v;
    const ShapiroWilk b = shapiro_wilk(x);
    EXPECT_NEAR(a.w, b.w, 1e-12);
    EXPECT_NEAR(a.p, b.p, 1e-12);
}

TEST(ShapiroWilk, ThreeSamples) {
    const ShapiroWilk a = shapiro_wilk({1.0, 2.0, 3.0});
    EXPECT_NEAR(a.w, 1.0, 1e-12);
    EXPECT_NEAR(a.p, 1.0, 1e-9);
}

TEST(ShapiroWilk, Errors) {
    EXPECT_THROW(shapiro_wilk({1.0, 2.0}), UsageError);
    EXPECT_THROW(shapiro_wilk({4.0, 4.0, 4.0, 4.0}), DegenerateError);
}

TEST(Midranks, Ties) {
    const std::vector<double> r = midranks({3.0, 1.0, 3.0, 2.0, 3.0});
    const std::vector<double> want = {4.0, 1.0, 4.0, 2.0, 4.0};
    EXPECT_EQ(r, want);
}

TEST(Wilcoxon, ExactReference) {
    const WilcoxonResult r = wilcoxon_signed_rank(kDiffs);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.n, 11);
    EXPECT_EQ(r.statistic, 5.0);
    EXPECT_NEAR(r.p, 0.0107421875, 1e-15);
}

TEST(Wilcoxon, AllPositiveSix) {
    const WilcoxonResult r = wilcoxon_signed_rank({1, 2, 3, 4, 5, 6});
    EXPECT_EQ(r.statistic, 0.0);
    EXPECT_DOUBLE_EQ(r.p, 2.0 / 64.0);
}

TEST(Wilcoxon, SymmetricDifferences) {
    const WilcoxonResult r = wilcoxon_signed_rank({1, -1, 2, -2, 3, -3, 4, -4});
    EXPECT_EQ(r.r_plus, 18.0);
    EXPECT_DOUBLE_EQ(r.p, 1.0);
}

TEST(Wilcoxon, ZerosDropped) {
    const WilcoxonResult a = wilcoxon_signed_rank({0, 0, 1, 2, 3, 4, 5, 6});
    EXPECT_EQ(a.n, 6);
    EXPECT_DOUBLE_EQ(a.p, 2.0 / 64.0);
    EXPECT_THROW(wilcoxon_signed_rank({0, 0, 0}), DegenerateError);
}

TEST(Wilcoxon, TiesMatchEnumeration) {
    const std::vector<double> d = {1, 1, 2, 2, -3, 4, 5, 5, 6, -7};
    std::vector<double> mag;
    std::vector<int> pos;
    for (double v : d) {
        mag.push_back(std::abs(v));
        pos.push_back(v > 0);
    }
    const WilcoxonResult r = wilcoxon_signed_rank(d);
    EXPECT_EQ(r.statistic, 15.0);
    EXPECT_NEAR(r.p, oracle::wilcoxon_enumerated_p(midranks(mag), pos), 1e-12);
}

TEST(Wilcoxon, RandomMatchEnumeration) {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> g(0.3, 1.0);
    for (int n = 3; n <= 14; ++n) {
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> d(static_cast<std::size_t>(n));
            for (double& v : d) v = std::round(g(rng) * 4.0) / 4.0 + 0.001;
            std::vector<double> mag;
            std::vector<int> pos;
            for (double v : d) {
                mag.push_back(std::abs(v));
                pos.push_back(v > 0);
            }
            EXPECT_NEAR(wilcoxon_signed_rank(d).p, oracle::wilcoxon_enumerated_p(midranks(mag), pos), 1e-12);
        }
    }
}

TEST(Wilcoxon, NormalApproximationAboveCutoff) {
    const WilcoxonResult r = wilcoxon_signed_rank(kBig);
    EXPECT_FALSE(r.exact);
    EXPECT_EQ(r.statistic, 151.0);
    EXPECT_NEAR(r.p, 0.09367559653193051, 1e-12);
    const WilcoxonResult e = wilcoxon_signed_rank(kBig, 30);
    EXPECT_TRUE(e.exact);
    EXPECT_NEAR(e.p, 0.09610157273709774, 1e-12);
}

TEST(Wilcoxon, ExactTails) {
    const Tails t = wilcoxon_exact_tails({1, 2, 3}, 0.0);
    EXPECT_DOUBLE_EQ(t.lower, 1.0 / 8.0);
    EXPECT_DOUBLE_EQ(t.upper, 1.0);
    EXPECT_THROW(wilcoxon_exact_tails({1, 2.3}, 1.0), UsageError);
}

TEST(PairedT, Reference) {
    const TTestResult r = paired_t(kDiffs);
    EXPECT_NEAR(r.t, 3.5505569288079877, 1e-12);
    EXPECT_EQ(r.df, 10.0);
    EXPECT_NEAR(r.p, 0.0052633595236086204, 1e-12);
}

TEST(PairedT, Errors) {
    EXPECT_THROW(paired_t({1.0}), UsageError);
    EXPECT_THROW(paired_t({2.0, 2.0, 2.0}), DegenerateError);
}
