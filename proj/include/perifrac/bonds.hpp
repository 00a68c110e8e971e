#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "perifrac/grid.hpp"
#include "perifrac/material.hpp"

namespace perifrac {

struct BondBuildOptions {
    bool adjacency = true;        // per-node incidence index for force gathers
    bool dynamics_arrays = true;  // unit vectors and force prefactors
};

// Half-bond table: every unordered pair (i, j) with 0 < |x_j - x_i| < eps is
// stored exactly once with i < j. Symmetry of the interaction is realized by
// flipping the sign of the unit vector when the bond is viewed from j.
struct BondTable {
    std::size_t n_nodes = 0;
    double h = 0.0;
    double eps = 0.0;

    std::vector<std::uint32_t> i;
    std::vector<std::uint32_t> j;
    std::vector<double> xi;    // rest length [m]
    std::vector<double> w;     // partial-volume weight in (0, 1]
    std::vector<double> epre;  // rho^eps(xi) * w * h^4, per ordered pair
    // Populated when dynamics_arrays is set:
    std::vector<double> ex, ey;        // unit vector from i to j
    std::vector<double> fpre;          // 2 rho^eps(xi)/sqrt(xi) * w * h^2
    std::vector<double> inv_sqrt_xi;

    // CSR incidence: for node n, bonds adj_bond[k] with the node at the
    // other end adj_other[k], k in [adj_off[n], adj_off[n+1]).
    std::vector<std::uint32_t> adj_off;
    std::vector<std::uint32_t> adj_bond;
    std::vector<std::uint32_t> adj_other;

    std::size_t bond_count() const { return xi.size(); }
};

inline double partial_volume_weight(double xi, double eps, double h) {
    return std::clamp((eps + 0.5 * h - xi) / h, 0.0, 1.0);
}

inline BondTable build_bond_table(const ParticleGrid& g, const BondBuildOptions& opt = {}) {
    BondTable t;
    t.n_nodes = g.node_count();
    t.h = g.h;
    t.eps = g.eps;

    const int m = static_cast<int>(std::ceil(g.eps / g.h));
    const double eps2 = g.eps * g.eps;
    const double h2 = g.h * g.h;

    // Enumerate lattice offsets (a,b) that pair each node with a strictly
    // greater node index, so each bond appears once.
    struct Offset {
        int a, b;
        double xi, w;
    };
    std::vector<Offset> offsets;
    for (int b = 0; b <= m; ++b) {
        for (int a = (b == 0 ? 1 : -m); a <= m; ++a) {
            const double d2 = (static_cast<double>(a) * a + static_cast<double>(b) * b) * h2;
            if (d2 <= 0.0 || d2 >= eps2) continue;
            const double xi = std::sqrt(d2);
            offsets.push_back({a, b, xi, partial_volume_weight(xi, g.eps, g.h)});
        }
    }

    for (int iy = 0; iy < g.ny; ++iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            const std::uint32_t ni = g.index(ix, iy);
            for (const Offset& o : offsets) {
                const int jx = ix + o.a;
                const int jy = iy + o.b;
                if (jx < 0 || jx >= g.nx || jy < 0 || jy >= g.ny) continue;
                const std::uint32_t nj = g.index(jx, jy);
                t.i.push_back(ni);
                t.j.push_back(nj);
                t.xi.push_back(o.xi);
                t.w.push_back(o.w);
            }
        }
    }

    const std::size_t nb = t.bond_count();
    t.epre.resize(nb);
    if (opt.dynamics_arrays) {
        t.ex.resize(nb);
        t.ey.resize(nb);
        t.fpre.resize(nb);
        t.inv_sqrt_xi.resize(nb);
    }
    const double h4 = h2 * h2;
    for (std::size_t b = 0; b < nb; ++b) {
        const double rho_e = kernel_rho(t.xi[b], g.eps, 2);
        t.epre[b] = rho_e * t.w[b] * h4;
        if (opt.dynamics_arrays) {
            const Vec2 d = g.pos[t.j[b]] - g.pos[t.i[b]];
            const double inv_xi = 1.0 / t.xi[b];
            t.ex[b] = d.x * inv_xi;
            t.ey[b] = d.y * inv_xi;
            t.inv_sqrt_xi[b] = 1.0 / std::sqrt(t.xi[b]);
            t.fpre[b] = 2.0 * rho_e * t.inv_sqrt_xi[b] * t.w[b] * h2;
        }
    }

    if (opt.adjacency) {
        t.adj_off.assign(t.n_nodes + 1, 0);
        for (std::size_t b = 0; b < nb; ++b) {
            ++t.adj_off[t.i[b] + 1];
            ++t.adj_off[t.j[b] + 1];
        }
        for (std::size_t n = 0; n < t.n_nodes; ++n) t.adj_off[n + 1] += t.adj_off[n];
        t.adj_bond.resize(2 * nb);
        t.adj_other.resize(2 * nb);
        std::vector<std::uint32_t> cursor(t.adj_off.begin(), t.adj_off.end() - 1);
        for (std::size_t b = 0; b < nb; ++b) {
            const std::uint32_t bi = t.i[b], bj = t.j[b];
            t.adj_bond[cursor[bi]] = static_cast<std::uint32_t>(b);
            t.adj_other[cursor[bi]++] = bj;
            t.adj_bond[cursor[bj]] = static_cast<std::uint32_t>(b);
            t.adj_other[cursor[bj]++] = bi;
        }
    }
    return t;
}

// Area covered by the partial-volume weights around an interior node: the
// center cell plus every lattice cell with a positive clamp weight. This is
// the quadrature the weights are built for; it tends to pi eps^2 as h -> 0.
inline double disk_coverage(const ParticleGrid& g) {
    const int m = static_cast<int>(std::ceil(g.eps / g.h)) + 1;
    double acc = 1.0;  // center cell
    for (int b = -m; b <= m; ++b) {
        for (int a = -m; a <= m; ++a) {
            if (a == 0 && b == 0) continue;
            const double xi = std::hypot(a * g.h, b * g.h);
            acc += partial_volume_weight(xi, g.eps, g.h);
        }
    }
    return acc * g.h * g.h;
}

// Ids of bonds whose open segment properly crosses the given segment.
inline std::vector<std::uint32_t> bonds_crossing_segment(const ParticleGrid& g, const BondTable& t,
                                                         const Segment& s) {
    std::vector<std::uint32_t> out;
    // Only bonds with an endpoint within eps of the segment's bounding box
    // can cross; a full scan is still cheap and keeps this correct for any
    // segment orientation.
    const std::size_t nb = t.bond_count();
    const double x_lo = std::min(s.a.x, s.b.x) - t.eps;
    const double x_hi = std::max(s.a.x, s.b.x) + t.eps;
    const double y_lo = std::min(s.a.y, s.b.y) - t.eps;
    const double y_hi = std::max(s.a.y, s.b.y) + t.eps;
    for (std::size_t b = 0; b < nb; ++b) {
        const Vec2& p = g.pos[t.i[b]];
        const Vec2& q = g.pos[t.j[b]];
        if (std::max(p.x, q.x) < x_lo || std::min(p.x, q.x) > x_hi ||
            std::max(p.y, q.y) < y_lo || std::min(p.y, q.y) > y_hi)
            continue;
        if (properly_crosses(p, q, s)) out.push_back(static_cast<std::uint32_t>(b));
    }
    return out;
}

}  // namespace perifrac
