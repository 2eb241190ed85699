#pragma once

#include <complex>
#include <vector>

namespace exosim {

/// Second-order section with a0 = 1, run in transposed direct form II.
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};
using Sos = std::vector<Biquad>;

/// Digital Butterworth low-pass of the given order (bilinear transform, prewarped cutoff).
Sos butter_lowpass(int order, double fc, double fs);
/// Digital Butterworth band-pass built from an order-N prototype (2N poles, N sections).
Sos butter_bandpass(int order, double f_lo, double f_hi, double fs);

/// Complex response at frequency f (Hz).
std::complex<double> frequency_response(const Sos& sos, double f, double fs);

/// Causal cascade filtering from zero state.
std::vector<double> sosfilt(const Sos& sos, const std::vector<double>& x);
/// Forward-backward filtering with odd extension of 3*(2*sections+1) samples and
/// steady-state initial conditions. Throws UsageError for signals not longer than the pad.
std::vector<double> sosfiltfilt(const Sos& sos, const std::vector<double>& x);

}  // namespace exosim
