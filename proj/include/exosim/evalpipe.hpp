#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "exosim/stats.hpp"

namespace exosim {

enum class EmgUnits { raw, percent_mvc };

struct EmgTrace {
    std::vector<double> samples;
    double rate = 1111.0;  // Hz
    std::string label;
    EmgUnits units = EmgUnits::raw;

    void validate() const;
};

/// Three-axis acceleration sampled at `rate`.
struct AccelTrace {
    std::array<std::vector<double>, 3> axes;
    double rate = 148.0;  // Hz
};

struct EmgFilterSpec {
    int bandpass_order = 4;  // prototype order; the band-pass has twice as many poles
    double band_lo = 20.0;   // Hz
    double band_hi = 350.0;  // Hz
    int lowpass_order = 4;
    double lowpass = 6.0;  // Hz
};

/// Zero-mean, band-pass, full-wave rectification, low-pass, then 100 * x / mvc_value.
/// All filtering is zero-phase. Throws RateError when rate <= 2 * band_hi and
/// UsageError when mvc_value <= 0.
EmgTrace preprocess_emg(const EmgTrace& raw, double mvc_value, const EmgFilterSpec& spec = {});

inline constexpr double kSegmentRate = 1111.0;  // Hz
inline constexpr double kActivityWindowMs = 30.0;

struct Segment1D {
    double start = 0.0;  // s
    double end = 0.0;    // s
};

/// Resamples to 1111 Hz (linear), slides a 30 ms window with 1-sample hop and sums the
/// per-axis variances. Start/end are the centres of the first/last window whose variance
/// exceeds the threshold. Throws NoActivityError when none does.
Segment1D segment_activity(const AccelTrace& accel, double threshold);

enum class RmsSummary { mean, max };

struct RmsResult {
    std::vector<double> series;  // one value per window position
    double summary = 0.0;
};

/// Sliding-window RMS (1-sample hop) over [start_s, end_s] of the envelope; negative
/// end_s means the whole trace. Throws UsageError when the window has fewer than 2 samples
/// or the segment is shorter than the window.
RmsResult rms_windows(const EmgTrace& envelope, double window_ms = kActivityWindowMs, double start_s = 0.0,
                      double end_s = -1.0, RmsSummary summary = RmsSummary::mean);

enum class TestUsed { t_test, wilcoxon };
const char* to_string(TestUsed t);

struct PairedStats {
    int n = 0;
    double normality_p = 0.0;  // Shapiro-Wilk on the differences; 0 when they are all equal
    TestUsed test_used = TestUsed::t_test;
    double statistic = 0.0;
    double p_value = 1.0;
    bool significant = false;
};

inline constexpr double kAlpha = 0.05;

/// Shapiro-Wilk on a - b; t-test when normality holds at 0.05, else Wilcoxon signed-rank.
/// Requires equal lengths with 3 <= n <= 50. Throws DegenerateError when all differences are zero.
PairedStats paired_compare(const std::vector<double>& a, const std::vector<double>& b);

struct Reduction {
    double absolute = 0.0;  // %MVC points
    double relative = 0.0;  // %
};

/// absolute = baseline - condition, relative = 100 * absolute / baseline.
std::vector<Reduction> reduction_table(const std::vector<double>& baseline, const std::vector<double>& condition);

/// Deterministic synthetic recordings for exercising the pipeline.
struct SyntheticSpec {
    double duration = 8.0;       // s
    double active_start = 2.0;   // s
    double active_end = 6.0;     // s
    double emg_rate = 1111.0;    // Hz
    double accel_rate = 148.0;   // Hz
    double emg_amplitude = 1.0;  // mV, standard deviation of the active burst
    double rest_amplitude = 0.02;
    double accel_noise = 0.01;  // g, rest
    double accel_active = 0.3;  // g, task
};

struct SyntheticTrial {
    EmgTrace emg;
    AccelTrace accel;
};

SyntheticTrial synthetic_trial(const SyntheticSpec& spec, std::uint64_t seed);

/// Standard normal draws (Box-Muller over a 64-bit Mersenne Twister); identical on every platform.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed);
    double next();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
    double uniform();
};

}  // namespace exosim
