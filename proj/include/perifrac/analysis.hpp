#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "perifrac/energy.hpp"

namespace perifrac {

// Strain energy density at one node: single sum over its unbroken bonds,
// rho^eps gamma g(r) w h^2.
inline double strain_energy_density(const BondTable& t, const DamageState& dmg,
                                    const std::vector<double>& bond_r, const ModelParams& model,
                                    std::size_t node) {
    const double inv_h2 = 1.0 / (t.h * t.h);
    double acc = 0.0;
    for (std::uint32_t k = t.adj_off[node]; k < t.adj_off[node + 1]; ++k) {
        const std::uint32_t b = t.adj_bond[k];
        if (dmg.broken[b]) continue;
        acc += t.epre[b] * inv_h2 * dmg.gamma[b] * potential(bond_r[b], model);
    }
    return acc;
}

// Z(x) = max over unbroken incident bonds of r / r_c. Nodes with every bond
// broken are detached and yield no value.
inline std::optional<double> strain_concentration(const BondTable& t, const DamageState& dmg,
                                                  const std::vector<double>& bond_r,
                                                  const ModelParams& model, std::size_t node) {
    bool any = false;
    double zmax = 0.0;
    for (std::uint32_t k = t.adj_off[node]; k < t.adj_off[node + 1]; ++k) {
        const std::uint32_t b = t.adj_bond[k];
        if (dmg.broken[b]) continue;
        any = true;
        zmax = std::max(zmax, bond_r[b] / model.r_c);
    }
    if (!any) return std::nullopt;
    return std::max(zmax, 0.0);
}

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> phi;  // nodal damage index
    std::vector<double> W;    // strain energy density
    std::vector<double> Z;    // strain concentration; 0 on detached nodes
};

inline FieldSnapshot make_snapshot(const ParticleGrid& g, const BondTable& t,
                                   const DamageState& dmg, const std::vector<double>& bond_r,
                                   const ModelParams& model, double time, int nthreads) {
    FieldSnapshot s;
    s.t = time;
    s.phi = damage_index(t, dmg, nthreads);
    s.W.resize(g.node_count());
    s.Z.resize(g.node_count());
    parallel_for(g.node_count(), nthreads, [&](std::size_t n) {
        s.W[n] = strain_energy_density(t, dmg, bond_r, model, n);
        s.Z[n] = strain_concentration(t, dmg, bond_r, model, n).value_or(0.0);
    });
    return s;
}

struct CrackPath {
    int component_count = 0;  // 8-connected components of the whole crack set
    int arm_count = 0;        // max component count ahead of any cutoff past the notch
    std::vector<int> component_sizes;
    std::vector<Vec2> component_tips;  // extremal-x node of each component
    Vec2 tip{0.0, 0.0};                // crack node with the largest x overall
    bool has_crack = false;
    double crack_min_x = 0.0;
    double crack_max_x = 0.0;
};

// Thresholds the damage index and labels 8-connected crack components.
// Branching is measured by sweeping a column cutoff from the notch tip to
// the crack tip and counting components of the crack set restricted to
// x >= cutoff: a straight crack yields 1 for every cutoff, a bifurcated
// crack yields 2 beyond the branch point. Components smaller than
// min_component_size nodes are treated as specks and ignored.
inline CrackPath extract_crack_path(const ParticleGrid& g, const std::vector<double>& phi,
                                    double threshold, double notch_end_x,
                                    int min_component_size = 3) {
    CrackPath out;
    const int nx = g.nx, ny = g.ny;
    std::vector<std::uint8_t> mask(g.node_count(), 0);
    std::vector<std::uint32_t> crack_nodes;
    for (std::size_t n = 0; n < g.node_count(); ++n) {
        if (phi[n] >= threshold) {
            mask[n] = 1;
            crack_nodes.push_back(static_cast<std::uint32_t>(n));
        }
    }
    if (crack_nodes.empty()) return out;

    std::vector<int> stamp(g.node_count(), -1);
    std::vector<std::uint32_t> stack;

    // BFS restricted to nodes with ix >= ix_min; returns the component size
    // and its extremal-x node.
    auto flood = [&](std::uint32_t seed, int id, int ix_min) {
        int size = 0;
        std::uint32_t front = seed;
        stack.clear();
        stack.push_back(seed);
        stamp[seed] = id;
        while (!stack.empty()) {
            const std::uint32_t n = stack.back();
            stack.pop_back();
            ++size;
            const int ix = static_cast<int>(n % nx);
            const int iy = static_cast<int>(n / nx);
            if (ix > static_cast<int>(front % nx)) front = n;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int jx = ix + dx, jy = iy + dy;
                    if (jx < ix_min || jx >= nx || jy < 0 || jy >= ny) continue;
                    const std::uint32_t m = static_cast<std::uint32_t>(jy * nx + jx);
                    if (mask[m] && stamp[m] != id) {
                        stamp[m] = id;
                        stack.push_back(m);
                    }
                }
            }
        }
        return std::make_pair(size, front);
    };

    // Full labeling pass; drop specks from the mask.
    int id = 0;
    std::vector<std::uint32_t> kept;
    for (std::uint32_t n : crack_nodes) {
        if (stamp[n] >= 0) continue;
        const auto [size, front] = flood(n, id, 0);
        if (size >= min_component_size) {
            ++out.component_count;
            out.component_sizes.push_back(size);
            out.component_tips.push_back(g.pos[front]);
        } else {
            // unmark the speck
            for (std::size_t m = 0; m < mask.size(); ++m)
                if (stamp[m] == id) mask[m] = 0;
        }
        ++id;
    }
    for (std::uint32_t n : crack_nodes)
        if (mask[n]) kept.push_back(n);
    crack_nodes.swap(kept);
    if (crack_nodes.empty() || out.component_count == 0) {
        out.component_count = 0;
        return out;
    }

    out.has_crack = true;
    out.crack_min_x = std::numeric_limits<double>::infinity();
    out.crack_max_x = -std::numeric_limits<double>::infinity();
    for (std::uint32_t n : crack_nodes) {
        const Vec2& p = g.pos[n];
        out.crack_min_x = std::min(out.crack_min_x, p.x);
        if (p.x > out.crack_max_x) {
            out.crack_max_x = p.x;
            out.tip = p;
        }
    }

    // Cutoff sweep from just behind the notch tip to the crack tip. Specks
    // are already gone, so every component ahead of the cutoff counts.
    std::sort(crack_nodes.begin(), crack_nodes.end(), [&](std::uint32_t a, std::uint32_t b) {
        return static_cast<int>(a % nx) < static_cast<int>(b % nx);
    });
    const int ix_start =
        std::max(0, static_cast<int>(std::ceil((notch_end_x - 2.0 * g.eps) / g.h)));
    const int ix_end = static_cast<int>(out.crack_max_x / g.h);
    std::size_t first = 0;
    out.arm_count = 0;
    for (int ix0 = ix_start; ix0 <= ix_end; ++ix0) {
        while (first < crack_nodes.size() &&
               static_cast<int>(crack_nodes[first] % nx) < ix0)
            ++first;
        if (first >= crack_nodes.size()) break;
        const int cid = id + (ix0 - ix_start) + 1;
        int count = 0;
        for (std::size_t k = first; k < crack_nodes.size(); ++k) {
            const std::uint32_t n = crack_nodes[k];
            if (stamp[n] == cid) continue;  // already visited at this cutoff
            flood(n, cid, ix0);
            ++count;
        }
        out.arm_count = std::max(out.arm_count, count);
        if (out.arm_count >= 2) break;  // branch established
    }
    return out;
}

// --- Griffith flat-crack audit -------------------------------------------

struct GriffithOptions {
    double eps = 0.012;       // horizon used for the audit
    double eps_over_h = 6.0;  // quadrature resolution
    bool full_span = false;   // compare over the whole segment instead of the
                              // central portion (end caps included)
    double margin_factor = 3.0;  // auto domain margin around the segment, in eps
    double domain_L = 0.0;       // explicit domain override; 0 = auto margins
    double domain_H = 0.0;
};

struct GriffithResult {
    double f_total = 0.0;   // failure energy of all severed bonds
    double f_window = 0.0;  // portion attributed to the comparison window
    double target = 0.0;    // Gc times the window length
    double window_length = 0.0;
    double rel_error = 0.0;
    std::size_t bonds_broken = 0;
};

// Severs every bond crossing an interior horizontal segment of length ell
// and compares the failure energy against Gc * length. Each bond's energy
// is attributed to the x-coordinate where it crosses the line, so the
// default central-window comparison excludes the two eps end caps.
inline GriffithResult griffith_flat_crack_check(const MaterialConstants& mat, double ell,
                                                const GriffithOptions& opt = {}) {
    if (!(ell >= 3.0 * opt.eps))
        throw std::invalid_argument("griffith check: require ell >= 3 eps");
    const double h = opt.eps / opt.eps_over_h;
    const double margin = opt.margin_factor * opt.eps;

    DomainConfig dom;
    dom.h = h;
    dom.eps = opt.eps;
    dom.L = opt.domain_L > 0.0 ? opt.domain_L : ell + 2.0 * margin;
    dom.H = opt.domain_H > 0.0 ? opt.domain_H : 2.0 * margin;
    ParticleGrid grid = build_grid(dom);

    BondBuildOptions bopt;
    bopt.adjacency = false;
    bopt.dynamics_arrays = false;
    BondTable bonds = build_bond_table(grid, bopt);

    const ModelParams model = calibrate(mat, opt.eps, 2);

    // Horizontal segment centered on the mid-height lattice line.
    const double y_line = std::floor(grid.ny / 2.0 + 0.5) * h;
    const double x0 = 0.5 * (grid.Lx - ell);
    if (x0 < opt.eps || y_line < 2.0 * opt.eps || grid.Ly - y_line < 2.0 * opt.eps)
        throw std::invalid_argument("griffith check: segment not interior to the domain");
    const Segment seg{Vec2{x0, y_line}, Vec2{x0 + ell, y_line}};

    GriffithResult res;
    const double x_lo = opt.full_span ? seg.a.x : seg.a.x + opt.eps;
    const double x_hi = opt.full_span ? seg.b.x : seg.b.x - opt.eps;
    res.window_length = x_hi - x_lo;

    for (std::uint32_t b : bonds_crossing_segment(grid, bonds, seg)) {
        ++res.bonds_broken;
        const double term = 2.0 * model.g_inf * bonds.epre[b];
        res.f_total += term;
        const Vec2& p = grid.pos[bonds.i[b]];
        const Vec2& q = grid.pos[bonds.j[b]];
        const double u = (y_line - p.y) / (q.y - p.y);
        const double x_cross = p.x + u * (q.x - p.x);
        if (x_cross >= x_lo && x_cross <= x_hi) res.f_window += term;
    }
    res.target = mat.Gc * res.window_length;
    res.rel_error = std::abs(res.f_window - res.target) / res.target;
    return res;
}

// --- Quiescent linear elasticity audit ------------------------------------

struct QuiescentResult {
    double W_bond = 0.0;
    double W_closed_form = 0.0;
    double rel_error = 0.0;
};

// Applies the affine field u = F x on a patch at least 4 eps wide and
// compares the center-node energy density with 2 mu |F|^2 + lambda tr(F)^2.
inline QuiescentResult quiescent_elasticity_check(const double F[2][2], double eps,
                                                  double eps_over_h, const ModelParams& model) {
    if (std::abs(F[0][1] - F[1][0]) > 1e-14 * (std::abs(F[0][1]) + std::abs(F[1][0]) + 1e-300))
        throw std::invalid_argument("quiescent check: F must be symmetric");

    DomainConfig dom;
    dom.h = eps / eps_over_h;
    dom.eps = eps;
    dom.L = 5.0 * eps;
    dom.H = 5.0 * eps;
    ParticleGrid grid = build_grid(dom);
    BondTable bonds = build_bond_table(grid);
    DamageState dmg(bonds.bond_count());

    std::vector<Vec2> u(grid.node_count());
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
        const Vec2& x = grid.pos[n];
        u[n] = Vec2{F[0][0] * x.x + F[0][1] * x.y, F[1][0] * x.x + F[1][1] * x.y};
    }
    std::vector<double> bond_r;
    compute_bond_strains(bonds, u, bond_r, 1);

    // The linear comparison is meaningless once bonds soften.
    for (double r : bond_r)
        if (std::abs(r) >= 0.25 * model.r_c)
            throw std::invalid_argument("quiescent check: strains reach the softening range");

    const std::size_t center = grid.index(grid.nx / 2, grid.ny / 2);
    QuiescentResult res;
    res.W_bond = strain_energy_density(bonds, dmg, bond_r, model, center);
    const double fro2 =
        F[0][0] * F[0][0] + F[0][1] * F[0][1] + F[1][0] * F[1][0] + F[1][1] * F[1][1];
    const double tr = F[0][0] + F[1][1];
    res.W_closed_form = 2.0 * model.mu * fro2 + model.lambda * tr * tr;
    res.rel_error = res.W_closed_form != 0.0
                        ? std::abs(res.W_bond - res.W_closed_form) / std::abs(res.W_closed_form)
                        : std::abs(res.W_bond);
    return res;
}

}  // namespace perifrac
