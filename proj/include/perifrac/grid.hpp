#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "perifrac/geometry.hpp"

namespace perifrac {

struct DomainConfig {
    double L = 0.0;    // length [m]
    double H = 0.0;    // height [m]
    double h = 0.0;    // lattice spacing [m]
    double eps = 0.0;  // horizon [m]
};

// Uniform lattice of cell-centered nodes covering [0,L] x [0,H], with the
// top/bottom loading strips (nodes within eps of the respective edge).
struct ParticleGrid {
    int nx = 0;
    int ny = 0;
    double h = 0.0;
    double eps = 0.0;
    double Lx = 0.0;  // realized extents nx*h, ny*h
    double Ly = 0.0;
    std::vector<Vec2> pos;
    std::vector<std::uint32_t> top_strip;
    std::vector<std::uint32_t> bottom_strip;

    std::size_t node_count() const { return pos.size(); }
    double cell_volume() const { return h * h; }
    std::uint32_t index(int ix, int iy) const {
        return static_cast<std::uint32_t>(iy) * static_cast<std::uint32_t>(nx) +
               static_cast<std::uint32_t>(ix);
    }
};

inline ParticleGrid build_grid(const DomainConfig& cfg) {
    if (!(cfg.L > 0.0 && cfg.H > 0.0 && cfg.h > 0.0))
        throw std::invalid_argument("domain: L, H, h must be positive");
    if (!(cfg.eps >= 2.0 * cfg.h))
        throw std::invalid_argument("domain: horizon under-resolved (require epsilon >= 2h)");

    ParticleGrid g;
    g.h = cfg.h;
    g.eps = cfg.eps;
    g.nx = static_cast<int>(std::floor(cfg.L / cfg.h + 1e-9));
    g.ny = static_cast<int>(std::floor(cfg.H / cfg.h + 1e-9));
    if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("domain: fewer than one cell per side");
    if (std::abs(g.nx * cfg.h - cfg.L) > cfg.h || std::abs(g.ny * cfg.h - cfg.H) > cfg.h)
        throw std::invalid_argument("domain: h must divide L and H to within one cell");
    g.Lx = g.nx * cfg.h;
    g.Ly = g.ny * cfg.h;

    g.pos.resize(static_cast<std::size_t>(g.nx) * g.ny);
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = (iy + 0.5) * g.h;
        for (int ix = 0; ix < g.nx; ++ix) {
            g.pos[g.index(ix, iy)] = Vec2{(ix + 0.5) * g.h, y};
        }
    }
    // Strip membership by the x2 coordinate alone. Cell centers never sit
    // exactly on y = eps or y = Ly - eps when eps is a multiple of h, so
    // strict comparisons are unambiguous.
    for (int iy = 0; iy < g.ny; ++iy) {
        const double y = (iy + 0.5) * g.h;
        if (y < g.eps) {
            for (int ix = 0; ix < g.nx; ++ix) g.bottom_strip.push_back(g.index(ix, iy));
        }
        if (y > g.Ly - g.eps) {
            for (int ix = 0; ix < g.nx; ++ix) g.top_strip.push_back(g.index(ix, iy));
        }
    }
    return g;
}

struct PreNotch {
    Segment seg;

    void validate(const ParticleGrid& g) const {
        auto inside = [&](const Vec2& p) {
            return p.x >= 0.0 && p.x <= g.Lx && p.y >= 0.0 && p.y <= g.Ly;
        };
        if (!inside(seg.a) || !inside(seg.b))
            throw std::invalid_argument("notch: segment must lie inside the domain");
        if (norm(seg.b - seg.a) <= 0.0)
            throw std::invalid_argument("notch: zero-length segment");
    }
};

}  // namespace perifrac
