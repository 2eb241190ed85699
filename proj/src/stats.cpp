#include "exosim/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "exosim/errors.hpp"

namespace exosim {

namespace {

double poly(const double* c, int nord, double x) {
    double ret = c[0];
    if (nord > 1) {
        double p = x * c[nord - 1];
        for (int j = nord - 2; j > 0; --j) p = (p + c[j]) * x;
        ret += p;
    }
    return ret;
}

double norm_quantile(double p) { return boost::math::quantile(boost::math::normal(), p); }
double norm_sf(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

}  // namespace

ShapiroWilk shapiro_wilk(std::vector<double> x) {
    const int n = static_cast<int>(x.size());
    if (n < 3 || n > 5000) throw UsageError("shapiro_wilk: need 3 <= n <= 5000");
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 1e-19)) throw DegenerateError("shapiro_wilk: all values are equal");

    static const double g[] = {-2.273, 0.459};
    static const double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static const double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static const double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static const double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static const double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static const double c6[] = {-0.4803, -0.082676, 0.0030302};

    const double an = n;
    const int n2 = n / 2;
    std::vector<double> a(static_cast<std::size_t>(n2));
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        const double an25 = an + 0.25;
        std::vector<double> m(static_cast<std::size_t>(n2));
        double summ2 = 0.0;
        for (int i = 0; i < n2; ++i) {
            m[static_cast<std::size_t>(i)] = norm_quantile((i + 1 - 0.375) / an25);
            summ2 += m[static_cast<std::size_t>(i)] * m[static_cast<std::size_t>(i)];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = poly(c1, 6, rsn) - m[0] / ssumm2;
        int i1 = 0;
        double fac = 0.0;
        if (n > 5) {
            i1 = 2;
            const double a2 = -m[1] / ssumm2 + poly(c2, 6, rsn);
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            i1 = 1;
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (int i = i1; i < n2; ++i) a[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)] / fac;
    }

    // Full antisymmetric coefficient vector against the range-scaled sorted sample.
    std::vector<double> af(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n2; ++i) {
        af[static_cast<std::size_t>(i)] = -a[static_cast<std::size_t>(i)];
        af[static_cast<std::size_t>(n - 1 - i)] = a[static_cast<std::size_t>(i)];
    }
    double sx = 0.0, sa = 0.0;
    for (int i = 0; i < n; ++i) {
        sx += x[static_cast<std::size_t>(i)] / range;
        sa += af[static_cast<std::size_t>(i)];
    }
    sx /= an;
    sa /= an;
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (int i = 0; i < n; ++i) {
        const double asa = af[static_cast<std::size_t>(i)] - sa;
        const double xsx = x[static_cast<std::size_t>(i)] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    ShapiroWilk out;
    out.w = 1.0 - w1;

    if (n == 3) {
        const double pi6 = 6.0 / 3.14159265358979323846;
        const double stqr = 3.14159265358979323846 / 3.0;
        out.p = std::max(0.0, pi6 * (std::asin(std::sqrt(out.w)) - stqr));
        return out;
    }
    double y = std::log(w1);
    const double xx = std::log(an);
    double mean = 0.0, sd = 0.0;
    if (n <= 11) {
        const double gamma = poly(g, 2, an);
        if (y >= gamma) {
            out.p = 1e-99;
            return out;
        }
        y = -std::log(gamma - y);
        mean = poly(c3, 4, an);
        sd = std::exp(poly(c4, 4, an));
    } else {
        mean = poly(c5, 4, xx);
        sd = std::exp(poly(c6, 3, xx));
    }
    out.p = norm_sf((y - mean) / sd);
    return out;
}

std::vector<double> midranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = rank;
        i = j + 1;
    }
    return r;
}

Tails wilcoxon_exact_tails(const std::vector<double>& ranks, double r_plus) {
    // Mid-ranks are multiples of 1/2, so doubled ranks are integers.
    std::vector<long> dr;
    long total = 0;
    for (double r : ranks) {
        const long v = std::lround(2.0 * r);
        if (std::abs(2.0 * r - static_cast<double>(v)) > 1e-9 || v <= 0)
            throw UsageError("wilcoxon: ranks must be positive multiples of 1/2");
        dr.push_back(v);
        total += v;
    }
    // count[s] = number of sign assignments with doubled positive-rank sum s, scaled by 2^-n as we go.
    std::vector<double> prob(static_cast<std::size_t>(total) + 1, 0.0);
    prob[0] = 1.0;
    long reach = 0;
    for (long v : dr) {
        reach += v;
        for (long s = reach; s >= 0; --s) {
            const double keep = prob[static_cast<std::size_t>(s)];
            const double add = s >= v ? prob[static_cast<std::size_t>(s - v)] : 0.0;
            prob[static_cast<std::size_t>(s)] = 0.5 * (keep + add);
        }
    }
    const long t = std::lround(2.0 * r_plus);
    Tails out;
    for (long s = 0; s <= total; ++s) {
        if (s <= t) out.lower += prob[static_cast<std::size_t>(s)];
        if (s >= t) out.upper += prob[static_cast<std::size_t>(s)];
    }
    return out;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& d, int exact_max) {
    std::vector<double> nz;
    for (double v : d) {
        if (!std::isfinite(v)) throw UsageError("wilcoxon: non-finite difference");
        if (v != 0.0) nz.push_back(v);
    }
    if (nz.empty()) throw DegenerateError("wilcoxon: all differences are zero");
    std::vector<double> mag(nz.size());
    for (std::size_t i = 0; i < nz.size(); ++i) mag[i] = std::abs(nz[i]);
    const std::vector<double> r = midranks(mag);

    WilcoxonResult out;
    out.n = static_cast<int>(nz.size());
    double total = 0.0;
    for (std::size_t i = 0; i < nz.size(); ++i) {
        total += r[i];
        if (nz[i] > 0.0) out.r_plus += r[i];
    }
    out.statistic = std::min(out.r_plus, total - out.r_plus);

    if (out.n <= exact_max) {
        const Tails t = wilcoxon_exact_tails(r, out.r_plus);
        out.exact = true;
        out.p = std::min(1.0, 2.0 * std::min(t.lower, t.upper));
        return out;
    }
    const double n = out.n;
    double var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;
    std::vector<double> sorted = mag;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        var -= (t * t * t - t) / 48.0;
        i = j;
    }
    const double z = (out.r_plus - n * (n + 1.0) / 4.0) / std::sqrt(var);
    out.p = std::min(1.0, 2.0 * norm_sf(std::abs(z)));
    return out;
}

TTestResult paired_t(const std::vector<double>& d) {
    if (d.size() < 2) throw UsageError("paired_t: need at least 2 differences");
    const double n = static_cast<double>(d.size());
    const double mean = std::accumulate(d.begin(), d.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    if (!(sd > 0.0)) throw DegenerateError("paired_t: differences have zero variance");
    TTestResult out;
    out.df = n - 1.0;
    out.t = mean / (sd / std::sqrt(n));
    const boost::math::students_t dist(out.df);
    out.p = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(out.t))));
    return out;
}

}  // namespace exosim
