#include "exosim/romsim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "exosim/errors.hpp"
#include "exosim/parallel.hpp"

namespace exosim {

namespace {

constexpr double kCollisionTol = 1e-9;
// Areas closer than this (relative) are ties; grid-identical boundaries differ only by rounding.
constexpr double kAreaTieRel = 1e-9;

std::vector<double> grid(double lo, double hi, double step) {
    std::vector<double> g;
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    g.reserve(static_cast<std::size_t>(n) + 2);
    for (long i = 0; i <= n; ++i) g.push_back(lo + static_cast<double>(i) * step);
    if (hi - g.back() > 1e-9) g.push_back(hi);
    return g;
}

using BinMap = std::map<long, double>;

void visit(const ShoulderDesign& design, double step, double he, double se, BinMap& bins) {
    const UserAngles u = ik_user(fk_exo(he, se, design), design.D_user);
    if (u.theta_h > he + kCollisionTol || u.theta_s > se + kCollisionTol) return;
    const long bin = std::lround(u.theta_h / step);
    auto [it, inserted] = bins.try_emplace(bin, u.theta_s);
    if (!inserted) it->second = std::max(it->second, u.theta_s);
}

}  // namespace

double rom_area(const RomBoundary& boundary) {
    const auto& s = boundary.samples;
    if (s.size() < 2) throw UsageError("rom_area: boundary needs at least 2 samples");
    double area = 0.0;
    for (std::size_t i = 1; i < s.size(); ++i)
        area += 0.5 * (s[i].theta_s_user_max + s[i - 1].theta_s_user_max) * (s[i].theta_h_user - s[i - 1].theta_h_user);
    return area;
}

RomReport simulate_rom(const ShoulderDesign& design, double grid_step, unsigned workers, SweepOrder order) {
    design.validate();
    if (!(grid_step > 0.0 && grid_step <= 5.0)) throw UsageError("simulate_rom: grid_step must lie in (0, 5] deg");

    const auto hs = grid(design.theta_h_exo_min, design.theta_h_exo_max, grid_step);
    const auto ss = grid(0.0, design.theta_s_exo_max, grid_step);
    const auto& outer = order == SweepOrder::h_outer ? hs : ss;
    const auto& inner = order == SweepOrder::h_outer ? ss : hs;

    std::vector<BinMap> partial(outer.size());
    parallel_for(outer.size(), workers, [&](std::size_t i) {
        for (double v : inner) {
            if (order == SweepOrder::h_outer)
                visit(design, grid_step, outer[i], v, partial[i]);
            else
                visit(design, grid_step, v, outer[i], partial[i]);
        }
    });

    BinMap bins;
    for (const auto& part : partial)
        for (const auto& [k, v] : part) {
            auto [it, inserted] = bins.try_emplace(k, v);
            if (!inserted) it->second = std::max(it->second, v);
        }

    RomReport rep;
    rep.boundary.design = design;
    for (const auto& [k, v] : bins) rep.boundary.samples.push_back({static_cast<double>(k) * grid_step, v});
    if (rep.boundary.samples.empty()) {
        rep.empty = true;
        return rep;
    }
    rep.area = rep.boundary.samples.size() >= 2 ? rom_area(rep.boundary) : 0.0;
    for (const auto& s : rep.boundary.samples) {
        rep.max_sagittal = std::max(rep.max_sagittal, s.theta_s_user_max);
    }
    rep.max_horizontal = rep.boundary.samples.back().theta_h_user;
    return rep;
}

std::vector<RomReport> compare_designs(const std::vector<ShoulderDesign>& designs, double grid_step,
                                       unsigned workers) {
    if (designs.empty()) throw UsageError("compare_designs: no designs given");
    std::vector<RomReport> reports(designs.size());
    parallel_for(designs.size(), workers, [&](std::size_t i) { reports[i] = simulate_rom(designs[i], grid_step, 1); });
    std::vector<std::size_t> idx(designs.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double tol = kAreaTieRel * std::max(std::abs(reports[a].area), std::abs(reports[b].area));
        if (std::abs(reports[a].area - reports[b].area) > tol) return reports[a].area > reports[b].area;
        return reports[a].max_sagittal > reports[b].max_sagittal;
    });
    std::vector<RomReport> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(std::move(reports[i]));
    return out;
}

}  // namespace exosim
