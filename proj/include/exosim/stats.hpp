#pragma once

#include <vector>

namespace exosim {

struct ShapiroWilk {
    double w = 0.0;
    double p = 0.0;
};

/// Shapiro-Wilk normality test (Royston's approximation), 3 <= n <= 5000.
/// Throws DegenerateError when all values are equal.
ShapiroWilk shapiro_wilk(std::vector<double> x);

struct WilcoxonResult {
    double statistic = 0.0;  // min(R+, R-)
    double r_plus = 0.0;
    double p = 0.0;          // two-sided
    int n = 0;               // non-zero differences
    bool exact = false;
};

/// Signed-rank test on differences. Zeros are dropped, ties take mid-ranks.
/// The null distribution is exact (enumerated over signs of the observed ranks) for n <= exact_max.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& d, int exact_max = 25);

/// P(R+ <= r_plus) and P(R+ >= r_plus) under the exact sign-flip null for the given ranks.
struct Tails {
    double lower = 0.0;
    double upper = 0.0;
};
Tails wilcoxon_exact_tails(const std::vector<double>& ranks, double r_plus);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 0.0;  // two-sided
};

/// One-sample t-test of mean(d) = 0 (the paired t-test on differences).
TTestResult paired_t(const std::vector<double>& d);

/// Mid-ranks (1-based) of values.
std::vector<double> midranks(const std::vector<double>& v);

}  // namespace exosim
