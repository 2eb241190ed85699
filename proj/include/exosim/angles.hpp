#pragma once

#include <cmath>
#include <numbers>

namespace exosim {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle into (-180, 180].
inline double wrap_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) w += 360.0;
    if (w > 180.0) w -= 360.0;
    return w;
}

/// Wraps an angle into [0, 2*pi).
inline double wrap_2pi(double rad) {
    double w = std::fmod(rad, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w;
}

}  // namespace exosim
