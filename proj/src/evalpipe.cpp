#include "exosim/evalpipe.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "exosim/angles.hpp"
#include "exosim/errors.hpp"
#include "exosim/filters.hpp"

namespace exosim {

void EmgTrace::validate() const {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw UsageError("EMG trace: rate must be > 0 Hz");
    for (double v : samples)
        if (!std::isfinite(v)) throw UsageError("EMG trace: non-finite sample");
}

EmgTrace preprocess_emg(const EmgTrace& raw, double mvc_value, const EmgFilterSpec& spec) {
    raw.validate();
    if (!(raw.rate > 2.0 * spec.band_hi))
        throw RateError("preprocess_emg: rate " + std::to_string(raw.rate) + " Hz must exceed " +
                        std::to_string(2.0 * spec.band_hi) + " Hz");
    if (!(mvc_value > 0.0)) throw UsageError("preprocess_emg: mvc_value must be > 0");

    std::vector<double> x = raw.samples;
    if (x.empty()) throw UsageError("preprocess_emg: empty trace");
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    for (double& v : x) v -= mean;

    x = sosfiltfilt(butter_bandpass(spec.bandpass_order, spec.band_lo, spec.band_hi, raw.rate), x);
    for (double& v : x) v = std::abs(v);
    x = sosfiltfilt(butter_lowpass(spec.lowpass_order, spec.lowpass, raw.rate), x);
    for (double& v : x) v = v / mvc_value * 100.0;

    EmgTrace out;
    out.samples = std::move(x);
    out.rate = raw.rate;
    out.label = raw.label;
    out.units = EmgUnits::percent_mvc;
    return out;
}

namespace {

std::vector<double> resample_linear(const std::vector<double>& x, double rate, double new_rate) {
    if (x.size() < 2) return x;
    const double duration = static_cast<double>(x.size() - 1) / rate;
    const auto n = static_cast<std::size_t>(std::floor(duration * new_rate + 1e-9)) + 1;
    std::vector<double> y(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double pos = static_cast<double>(k) / new_rate * rate;
        auto i = static_cast<std::size_t>(std::floor(pos));
        if (i >= x.size() - 1) i = x.size() - 2;
        const double f = pos - static_cast<double>(i);
        y[k] = x[i] + f * (x[i + 1] - x[i]);
    }
    return y;
}

}  // namespace

Segment1D segment_activity(const AccelTrace& accel, double threshold) {
    if (!(accel.rate > 0.0)) throw UsageError("segment_activity: rate must be > 0 Hz");
    const std::size_t len = accel.axes[0].size();
    if (accel.axes[1].size() != len || accel.axes[2].size() != len)
        throw UsageError("segment_activity: axes differ in length");

    std::array<std::vector<double>, 3> r;
    for (int a = 0; a < 3; ++a) r[a] = resample_linear(accel.axes[a], accel.rate, kSegmentRate);
    const auto w = static_cast<std::size_t>(std::lround(kActivityWindowMs * 1e-3 * kSegmentRate));
    const std::size_t n = r[0].size();
    if (n <= 2 * w) throw UsageError("segment_activity: trace must be longer than two windows");

    std::optional<std::size_t> first, last;
    for (std::size_t s = 0; s + w <= n; ++s) {
        double var = 0.0;
        for (const auto& ax : r) {
            double m = 0.0;
            for (std::size_t k = s; k < s + w; ++k) m += ax[k];
            m /= static_cast<double>(w);
            double ss = 0.0;
            for (std::size_t k = s; k < s + w; ++k) ss += (ax[k] - m) * (ax[k] - m);
            var += ss / static_cast<double>(w);
        }
        if (var > threshold) {
            if (!first) first = s;
            last = s;
        }
    }
    if (!first) throw NoActivityError("segment_activity: no window exceeds the variance threshold");
    const double half = 0.5 * static_cast<double>(w - 1);
    return {(static_cast<double>(*first) + half) / kSegmentRate, (static_cast<double>(*last) + half) / kSegmentRate};
}

RmsResult rms_windows(const EmgTrace& envelope, double window_ms, double start_s, double end_s, RmsSummary summary) {
    envelope.validate();
    const auto w = static_cast<std::size_t>(std::lround(window_ms * 1e-3 * envelope.rate));
    if (w < 2) throw UsageError("rms_windows: window must span at least 2 samples");
    const std::size_t n = envelope.samples.size();
    std::size_t i0 = 0, i1 = n;
    if (start_s > 0.0) i0 = std::min(n, static_cast<std::size_t>(std::ceil(start_s * envelope.rate - 1e-9)));
    if (end_s >= 0.0) i1 = std::min(n, static_cast<std::size_t>(std::floor(end_s * envelope.rate + 1e-9)) + 1);
    if (i1 < i0 || i1 - i0 < w) throw UsageError("rms_windows: segment is shorter than the window");

    RmsResult out;
    out.series.reserve(i1 - i0 - w + 1);
    for (std::size_t s = i0; s + w <= i1; ++s) {
        double ss = 0.0;
        for (std::size_t k = s; k < s + w; ++k) ss += envelope.samples[k] * envelope.samples[k];
        out.series.push_back(std::sqrt(ss / static_cast<double>(w)));
    }
    if (summary == RmsSummary::max)
        out.summary = *std::max_element(out.series.begin(), out.series.end());
    else
        out.summary = std::accumulate(out.series.begin(), out.series.end(), 0.0) / static_cast<double>(out.series.size());
    return out;
}

const char* to_string(TestUsed t) { return t == TestUsed::t_test ? "t_test" : "wilcoxon"; }

PairedStats paired_compare(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw UsageError("paired_compare: samples differ in length");
    if (a.size() < 3 || a.size() > 50) throw UsageError("paired_compare: need 3 <= n <= 50");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!std::isfinite(a[i]) || !std::isfinite(b[i])) throw UsageError("paired_compare: non-finite value");
        d[i] = a[i] - b[i];
    }
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; }))
        throw DegenerateError("paired_compare: all differences are zero");

    PairedStats out;
    out.n = static_cast<int>(d.size());
    const bool all_equal = std::all_of(d.begin(), d.end(), [&](double v) { return v == d[0]; });
    out.normality_p = all_equal ? 0.0 : shapiro_wilk(d).p;
    if (out.normality_p < kAlpha) {
        const WilcoxonResult w = wilcoxon_signed_rank(d);
        out.test_used = TestUsed::wilcoxon;
        out.statistic = w.statistic;
        out.p_value = w.p;
    } else {
        const TTestResult t = paired_t(d);
        out.test_used = TestUsed::t_test;
        out.statistic = t.t;
        out.p_value = t.p;
    }
    out.significant = out.p_value < kAlpha;
    return out;
}

std::vector<Reduction> reduction_table(const std::vector<double>& baseline, const std::vector<double>& condition) {
    if (baseline.size() != condition.size()) throw UsageError("reduction_table: muscle lists differ in length");
    std::vector<Reduction> out;
    out.reserve(baseline.size());
    for (std::size_t i = 0; i < baseline.size(); ++i) {
        if (!(baseline[i] > 0.0)) throw UsageError("reduction_table: baseline must be > 0");
        const double abs = baseline[i] - condition[i];
        out.push_back({abs, 100.0 * abs / baseline[i]});
    }
    return out;
}

NormalStream::NormalStream(std::uint64_t seed) : engine_(seed) {}

double NormalStream::uniform() {
    // 53 random bits in (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

SyntheticTrial synthetic_trial(const SyntheticSpec& spec, std::uint64_t seed) {
    if (!(spec.duration > 0.0 && spec.emg_rate > 0.0 && spec.accel_rate > 0.0))
        throw UsageError("synthetic_trial: duration and rates must be > 0");
    NormalStream g(seed);
    SyntheticTrial t;
    t.emg.rate = spec.emg_rate;
    t.emg.label = "synthetic";
    const auto ne = static_cast<std::size_t>(std::floor(spec.duration * spec.emg_rate)) + 1;
    t.emg.samples.resize(ne);
    for (std::size_t i = 0; i < ne; ++i) {
        const double time = static_cast<double>(i) / spec.emg_rate;
        const bool active = time >= spec.active_start && time < spec.active_end;
        t.emg.samples[i] = (active ? spec.emg_amplitude : spec.rest_amplitude) * g.next();
    }
    t.accel.rate = spec.accel_rate;
    const auto na = static_cast<std::size_t>(std::floor(spec.duration * spec.accel_rate)) + 1;
    for (auto& ax : t.accel.axes) ax.resize(na);
    for (std::size_t i = 0; i < na; ++i) {
        const double time = static_cast<double>(i) / spec.accel_rate;
        const bool active = time >= spec.active_start && time < spec.active_end;
        for (auto& ax : t.accel.axes) ax[i] = (active ? spec.accel_active : spec.accel_noise) * g.next();
    }
    return t;
}

}  // namespace exosim
