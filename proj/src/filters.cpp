#include "exosim/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "exosim/angles.hpp"
#include "exosim/errors.hpp"

namespace exosim {

namespace {

using cd = std::complex<double>;

// Analog Butterworth prototype poles in the left half plane, conjugate pairs adjacent.
std::vector<cd> prototype_poles(int order) {
    std::vector<cd> p;
    for (int k = 0; k < order; ++k) {
        const double ang = kPi * (2.0 * k + order + 1) / (2.0 * order);
        p.emplace_back(std::cos(ang), std::sin(ang));
    }
    return p;
}

cd bilinear(cd s, double fs2) { return (fs2 + s) / (fs2 - s); }

// Pairs z-plane poles into conjugate pairs (real poles paired with each other).
std::vector<std::array<cd, 2>> pair_poles(std::vector<cd> z) {
    std::vector<std::array<cd, 2>> pairs;
    std::vector<cd> reals;
    std::sort(z.begin(), z.end(), [](cd a, cd b) { return std::abs(a) < std::abs(b); });
    std::vector<bool> used(z.size(), false);
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (used[i]) continue;
        if (std::abs(z[i].imag()) <= 1e-14 * std::max(1.0, std::abs(z[i]))) {
            reals.push_back({z[i].real(), 0.0});
            used[i] = true;
            continue;
        }
        if (z[i].imag() < 0.0) continue;
        std::size_t best = z.size();
        for (std::size_t j = 0; j < z.size(); ++j) {
            if (used[j] || j == i || z[j].imag() >= 0.0) continue;
            if (best == z.size() || std::abs(z[j] - std::conj(z[i])) < std::abs(z[best] - std::conj(z[i]))) best = j;
        }
        if (best == z.size()) throw UsageError("filter design: unpaired complex pole");
        used[i] = used[best] = true;
        pairs.push_back({z[i], std::conj(z[i])});
    }
    for (std::size_t i = 0; i + 1 < reals.size(); i += 2) pairs.push_back({reals[i], reals[i + 1]});
    if (reals.size() % 2 == 1) pairs.push_back({reals.back(), cd(0.0, 0.0)});
    return pairs;
}

Biquad section(const std::array<cd, 2>& poles, double b0, double b1, double b2) {
    Biquad q;
    q.b0 = b0;
    q.b1 = b1;
    q.b2 = b2;
    q.a1 = -(poles[0] + poles[1]).real();
    q.a2 = (poles[0] * poles[1]).real();
    return q;
}

void check_rate(double fs, double f_hi) {
    if (!(fs > 0.0)) throw UsageError("filter design: sampling rate must be > 0 Hz");
    if (!(f_hi < 0.5 * fs)) throw RateError("filter design: cutoff must lie below the Nyquist frequency");
}

}  // namespace

Sos butter_lowpass(int order, double fc, double fs) {
    if (order < 1) throw UsageError("butter_lowpass: order must be >= 1");
    if (!(fc > 0.0)) throw UsageError("butter_lowpass: cutoff must be > 0 Hz");
    check_rate(fs, fc);
    const double fs2 = 2.0 * fs;
    const double wc = fs2 * std::tan(kPi * fc / fs);
    std::vector<cd> zp;
    for (cd p : prototype_poles(order)) zp.push_back(bilinear(p * wc, fs2));
    Sos sos;
    for (const auto& pr : pair_poles(zp)) {
        const bool first_order = pr[1] == cd(0.0, 0.0);
        Biquad q = first_order ? section(pr, 1.0, 1.0, 0.0) : section(pr, 1.0, 2.0, 1.0);
        // Unit gain at DC per section.
        const double g = (1.0 + q.a1 + q.a2) / (q.b0 + q.b1 + q.b2);
        q.b0 *= g;
        q.b1 *= g;
        q.b2 *= g;
        sos.push_back(q);
    }
    return sos;
}

Sos butter_bandpass(int order, double f_lo, double f_hi, double fs) {
    if (order < 1) throw UsageError("butter_bandpass: order must be >= 1");
    if (!(f_lo > 0.0 && f_lo < f_hi)) throw UsageError("butter_bandpass: need 0 < f_lo < f_hi");
    check_rate(fs, f_hi);
    const double fs2 = 2.0 * fs;
    const double wl = fs2 * std::tan(kPi * f_lo / fs);
    const double wh = fs2 * std::tan(kPi * f_hi / fs);
    const double bw = wh - wl;
    const double w0 = std::sqrt(wl * wh);
    std::vector<cd> zp;
    for (cd p : prototype_poles(order)) {
        const cd pl = p * (bw / 2.0);
        const cd root = std::sqrt(pl * pl - w0 * w0);
        zp.push_back(bilinear(pl + root, fs2));
        zp.push_back(bilinear(pl - root, fs2));
    }
    Sos sos;
    for (const auto& pr : pair_poles(zp)) sos.push_back(section(pr, 1.0, 0.0, -1.0));
    // Unit gain at the digital image of the analog centre frequency.
    const double f0 = fs / kPi * std::atan(w0 / fs2);
    const double g = 1.0 / std::abs(frequency_response(sos, f0, fs));
    const double gs = std::pow(g, 1.0 / static_cast<double>(sos.size()));
    for (auto& q : sos) {
        q.b0 *= gs;
        q.b1 *= gs;
        q.b2 *= gs;
    }
    return sos;
}

std::complex<double> frequency_response(const Sos& sos, double f, double fs) {
    const cd z1 = std::polar(1.0, -2.0 * kPi * f / fs);
    const cd z2 = z1 * z1;
    cd h(1.0, 0.0);
    for (const auto& q : sos) h *= (q.b0 + q.b1 * z1 + q.b2 * z2) / (1.0 + q.a1 * z1 + q.a2 * z2);
    return h;
}

namespace {

struct State {
    double z0 = 0.0, z1 = 0.0;
};

void run(const Sos& sos, std::vector<State>& st, std::vector<double>& x) {
    for (double& v : x) {
        double s = v;
        for (std::size_t k = 0; k < sos.size(); ++k) {
            const Biquad& q = sos[k];
            State& z = st[k];
            const double y = q.b0 * s + z.z0;
            z.z0 = q.b1 * s - q.a1 * y + z.z1;
            z.z1 = q.b2 * s - q.a2 * y;
            s = y;
        }
        v = s;
    }
}

// Per-section state that a unit step input leaves in steady state.
std::vector<State> steady_state(const Sos& sos) {
    std::vector<State> zi(sos.size());
    double scale = 1.0;
    for (std::size_t k = 0; k < sos.size(); ++k) {
        const Biquad& q = sos[k];
        // Solve [[1 + a1, -1], [a2, 1]] z = [b1 - a1 b0, b2 - a2 b0].
        const double r0 = q.b1 - q.a1 * q.b0;
        const double r1 = q.b2 - q.a2 * q.b0;
        const double det = (1.0 + q.a1) + q.a2;
        const double z0 = (r0 + r1) / det;
        const double z1 = r1 - q.a2 * z0;
        zi[k] = {scale * z0, scale * z1};
        scale *= (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    }
    return zi;
}

}  // namespace

std::vector<double> sosfilt(const Sos& sos, const std::vector<double>& x) {
    std::vector<State> st(sos.size());
    std::vector<double> y = x;
    run(sos, st, y);
    return y;
}

std::vector<double> sosfiltfilt(const Sos& sos, const std::vector<double>& x) {
    const std::size_t pad = 3 * (2 * sos.size() + 1);
    if (x.size() <= pad) throw UsageError("sosfiltfilt: signal must be longer than " + std::to_string(pad) + " samples");
    const std::size_t n = x.size();
    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
    ext.insert(ext.end(), x.begin(), x.end());
    for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

    const std::vector<State> zi = steady_state(sos);
    auto scaled = [&](double v) {
        std::vector<State> s = zi;
        for (auto& z : s) {
            z.z0 *= v;
            z.z1 *= v;
        }
        return s;
    };
    std::vector<State> st = scaled(ext.front());
    run(sos, st, ext);
    std::reverse(ext.begin(), ext.end());
    st = scaled(ext.front());
    run(sos, st, ext);
    std::reverse(ext.begin(), ext.end());
    return {ext.begin() + static_cast<long>(pad), ext.begin() + static_cast<long>(pad + n)};
}

}  // namespace exosim
