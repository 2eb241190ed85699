#include "exosim/cable.hpp"

#include <cmath>
#include <optional>

#include "exosim/angles.hpp"
#include "exosim/errors.hpp"

namespace exosim {

namespace {

using Eigen::Vector2d;

double cross(const Vector2d& a, const Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

Vector2d left_normal(const Vector2d& u) { return {-u.y(), u.x()}; }

double signed_radius(double r, WrapSense s) { return s == WrapSense::cw ? -r : r; }

struct Node {
    Vector2d c;
    double rho;  // + ccw, - cw, 0 point
};

struct Line {
    Vector2d from;  // tangent point on the first node
    Vector2d to;    // tangent point on the second node
    Vector2d u;     // unit direction
};

Line common_tangent(const Node& a, const Node& b) {
    const Vector2d e = b.c - a.c;
    const double d = e.norm();
    const double q = b.rho - a.rho;
    if (!(d > std::abs(q)) || d == 0.0) throw GeometryError("route: circles have no common tangent");
    const double phi = std::atan2(e.y(), e.x()) - std::asin(q / d);
    Line l;
    l.u = {std::cos(phi), std::sin(phi)};
    const Vector2d n = left_normal(l.u);
    l.from = a.c - a.rho * n;
    l.to = b.c - b.rho * n;
    return l;
}

// Positive when the span from->to passes circle c on its forbidden side. With within_span
// false the whole line counts, which keeps hairpin wraps engaged.
double violation(const Line& l, const Circle& c, bool within_span = true) {
    const Vector2d pq = l.to - l.from;
    const double len = pq.norm();
    if (len == 0.0) return -1.0;
    const Vector2d u = pq / len;
    const double t = (c.center - l.from).dot(u) / len;
    if (within_span && (t <= 0.0 || t >= 1.0)) return -1.0;
    const double s_left = cross(u, c.center - l.from);
    switch (c.sense) {
        case WrapSense::ccw: return c.radius - s_left;
        case WrapSense::cw: return c.radius + s_left;
        case WrapSense::either: return c.radius - std::abs(s_left);
    }
    return -1.0;
}

WrapSense resolve_either(const Line& l, const Circle& c) {
    return cross(l.u, c.center - l.from) >= 0.0 ? WrapSense::ccw : WrapSense::cw;
}

double violation_tol(const Circle& c) { return 1e-12 * (1.0 + c.radius); }

struct Solver {
    const Vector2d& anchor;
    const std::vector<Circle>& obs;
    Circle terminal;

    std::vector<std::optional<WrapSense>> state;  // resolved sense when engaged

    Node node_of(std::size_t k) const {
        if (k == obs.size()) return {terminal.center, signed_radius(terminal.radius, terminal.sense)};
        return {obs[k].center, signed_radius(obs[k].radius, *state[k])};
    }

    Node prev_node(std::size_t k) const {
        for (std::size_t j = k; j-- > 0;)
            if (state[j]) return node_of(j);
        return {anchor, 0.0};
    }

    Node next_node(std::size_t k) const {
        for (std::size_t j = k + 1; j < obs.size(); ++j)
            if (state[j]) return node_of(j);
        return node_of(obs.size());
    }

    void solve() {
        state.assign(obs.size(), std::nullopt);
        const std::size_t cap = 8 * (obs.size() + 1) + 16;
        for (std::size_t iter = 0; iter < cap; ++iter) {
            bool changed = false;
            for (std::size_t k = 0; k < obs.size() && !changed; ++k) {
                if (!state[k]) continue;
                const Line span = common_tangent(prev_node(k), next_node(k));
                Circle c = obs[k];
                c.sense = *state[k];
                if (violation(span, c, false) <= violation_tol(c)) {
                    state[k].reset();
                    changed = true;
                }
            }
            if (changed) continue;

            double worst = 0.0;
            std::optional<std::size_t> pick;
            WrapSense pick_sense = WrapSense::ccw;
            for (std::size_t k = 0; k < obs.size(); ++k) {
                if (state[k]) continue;
                const Line span = common_tangent(prev_node(k), next_node(k));
                const double v = violation(span, obs[k]);
                if (v > violation_tol(obs[k]) && v > worst) {
                    worst = v;
                    pick = k;
                    pick_sense = obs[k].sense == WrapSense::either ? resolve_either(span, obs[k]) : obs[k].sense;
                }
            }
            if (!pick) return;
            state[*pick] = pick_sense;
        }
        throw GeometryError("route: engagement search did not settle");
    }

    CablePath build() const {
        CablePath path;
        path.waypoints = obs;
        path.waypoints.push_back(terminal);
        path.terminal_sense = terminal.sense;
        path.engaged.resize(obs.size());

        std::vector<std::size_t> seq;
        for (std::size_t k = 0; k < obs.size(); ++k) {
            path.engaged[k] = state[k].has_value();
            if (state[k]) seq.push_back(k);
        }
        seq.push_back(obs.size());

        Node prev{anchor, 0.0};
        std::optional<std::size_t> prev_k;
        Vector2d arrive_n;
        for (std::size_t k : seq) {
            const Node cur = node_of(k);
            const Line l = common_tangent(prev, cur);
            const Vector2d n = left_normal(l.u);
            if (prev_k) {
                const double a_in = std::atan2(-arrive_n.y(), -arrive_n.x());
                const double a_out = std::atan2(-n.y(), -n.x());
                const WrapSense s = *state[*prev_k];
                // -rho*n points from centre to tangent point; its angle flips with the sense.
                const double from = s == WrapSense::ccw ? a_in : a_in + kPi;
                const double to = s == WrapSense::ccw ? a_out : a_out + kPi;
                const double arc = wrap_angle(s, from, to);
                path.wraps.push_back({*prev_k, rad2deg(arc), s});
                path.total_length += obs[*prev_k].radius * arc;
            }
            path.segments.push_back({l.from, l.to});
            path.total_length += (l.to - l.from).norm();
            arrive_n = n;
            prev = cur;
            prev_k = k;
        }
        const Vector2d t = path.segments.back().to - terminal.center;
        path.terminal_angle = terminal.radius > 0.0 ? std::atan2(t.y(), t.x()) : 0.0;
        return path;
    }
};

CablePath route_fixed_terminal(const Vector2d& anchor, const std::vector<Circle>& obstacles, const Circle& terminal) {
    Solver s{anchor, obstacles, terminal, {}};
    s.solve();
    return s.build();
}

}  // namespace

std::array<Vector2d, 2> tangent_points(const Vector2d& p, const Circle& c) {
    const Vector2d e = p - c.center;
    const double d = e.norm();
    if (!(d > c.radius) || d == 0.0) throw GeometryError("tangent_points: point lies inside or on the circle");
    if (c.radius == 0.0) return {c.center, c.center};
    const double base = std::atan2(e.y(), e.x());
    const double a = std::acos(c.radius / d);
    return {c.center + c.radius * Vector2d(std::cos(base + a), std::sin(base + a)),
            c.center + c.radius * Vector2d(std::cos(base - a), std::sin(base - a))};
}

double wrap_angle(WrapSense sense, double from, double to) {
    if (sense == WrapSense::either) throw UsageError("wrap_angle: sense must be resolved");
    double a = sense == WrapSense::ccw ? wrap_2pi(to - from) : wrap_2pi(from - to);
    if (a > 2.0 * kPi - 1e-9) a = 0.0;
    return a;
}

double terminal_wrap_length(const CablePath& path, double exit_angle) {
    const Circle& t = path.waypoints.back();
    if (t.radius == 0.0) return 0.0;
    return t.radius * wrap_angle(path.terminal_sense, path.terminal_angle, exit_angle);
}

CablePath route(const Vector2d& anchor, const std::vector<Circle>& obstacles, const Circle& terminal) {
    for (const auto& c : obstacles) {
        if (!(c.radius >= 0.0)) throw GeometryError("route: negative obstacle radius");
        if ((anchor - c.center).norm() <= c.radius) throw GeometryError("route: anchor lies inside an obstacle");
    }
    if (!(terminal.radius >= 0.0)) throw GeometryError("route: negative terminal radius");
    if ((anchor - terminal.center).norm() <= terminal.radius)
        throw GeometryError("route: anchor lies inside the terminal circle");

    if (terminal.sense != WrapSense::either) return route_fixed_terminal(anchor, obstacles, terminal);
    Circle ccw = terminal, cw = terminal;
    ccw.sense = WrapSense::ccw;
    cw.sense = WrapSense::cw;
    CablePath a = route_fixed_terminal(anchor, obstacles, ccw);
    CablePath b = route_fixed_terminal(anchor, obstacles, cw);
    return b.total_length < a.total_length ? b : a;
}

double moment_arm(const CablePath& path, const Vector2d& pivot) {
    if (path.segments.empty()) throw GeometryError("moment_arm: path has no straight span");
    const Segment& s = path.segments.front();
    const double len = s.length();
    if (!(len > 0.0)) throw GeometryError("moment_arm: first span has zero length");
    return std::abs(cross((s.to - s.from) / len, pivot - s.from));
}

}  // namespace exosim
