#pragma once

#include <Eigen/Core>
#include <array>
#include <vector>

namespace exosim {

/// Side on which the cable passes a circle. ccw: the circle lies to the left of
/// the direction of travel (the cable runs counter-clockwise around it).
enum class WrapSense { cw, ccw, either };

struct Circle {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();  // mm
    double radius = 0.0;                               // mm, 0 = point
    WrapSense sense = WrapSense::ccw;
};

struct Segment {
    Eigen::Vector2d from = Eigen::Vector2d::Zero();
    Eigen::Vector2d to = Eigen::Vector2d::Zero();
    double length() const { return (to - from).norm(); }
};

struct Wrap {
    std::size_t circle = 0;  // obstacle index
    double arc_deg = 0.0;
    WrapSense sense = WrapSense::ccw;  // resolved, never either
};

struct CablePath {
    std::vector<Circle> waypoints;  // obstacles in order, then the terminal
    std::vector<Segment> segments;  // straight spans from anchor to the terminal tangent point
    std::vector<Wrap> wraps;        // one per engaged obstacle, in path order
    std::vector<bool> engaged;      // per obstacle
    double total_length = 0.0;      // mm, ends at the terminal tangent point
    double terminal_angle = 0.0;    // rad, polar angle of the arrival point about the terminal centre
    WrapSense terminal_sense = WrapSense::ccw;  // resolved
};

/// The two points t on c with (t - p).(t - c.center) = 0.
/// Throws GeometryError when p lies inside or on the circle.
std::array<Eigen::Vector2d, 2> tangent_points(const Eigen::Vector2d& p, const Circle& c);

/// Shortest taut path from anchor to a tangent point on the terminal circle.
/// An obstacle carries the cable only when the free span over its position would
/// pass it on the wrong side (or, for either, cut through it).
/// Throws GeometryError for an anchor inside an obstacle or circles without a common tangent.
CablePath route(const Eigen::Vector2d& anchor, const std::vector<Circle>& obstacles, const Circle& terminal);

/// Angle (rad, in [0, 2pi)) swept going from `from` to `to` in the given resolved sense.
double wrap_angle(WrapSense sense, double from, double to);

/// Length wrapped on the terminal circle from the arrival point to the polar angle exit_angle (rad).
double terminal_wrap_length(const CablePath& path, double exit_angle);

/// Perpendicular distance from pivot to the first straight span.
/// Throws GeometryError for a missing or zero-length first span.
double moment_arm(const CablePath& path, const Eigen::Vector2d& pivot);

}  // namespace exosim
