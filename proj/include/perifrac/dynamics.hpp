#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "perifrac/damage.hpp"

namespace perifrac {

struct SimState {
    std::vector<Vec2> u;  // displacement [m]
    std::vector<Vec2> v;  // velocity [m/s]
    std::vector<Vec2> a;  // acceleration [m/s^2]
    double t = 0.0;
    long step = 0;

    explicit SimState(std::size_t n = 0) { resize(n); }
    void resize(std::size_t n) {
        u.assign(n, Vec2{});
        v.assign(n, Vec2{});
        a.assign(n, Vec2{});
        t = 0.0;
        step = 0;
    }
};

// Body force density applied along +e2 on the top strip and -e2 on the
// bottom strip, constant in time.
struct LoadSpec {
    double b = 0.0;  // [Pa]
    bool divide_by_epsilon = false;

    double node_magnitude(double eps) const { return divide_by_epsilon ? b / eps : b; }
};

struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Per-bond strains r = sqrt(xi) * S at the current displacements. These are
// the strains force assembly, damage and the energy sums all read.
inline void compute_bond_strains(const BondTable& t, const std::vector<Vec2>& u,
                                 std::vector<double>& r_out, int nthreads) {
    r_out.resize(t.bond_count());
    parallel_for(t.bond_count(), nthreads, [&](std::size_t b) {
        const Vec2& ui = u[t.i[b]];
        const Vec2& uj = u[t.j[b]];
        r_out[b] = ((uj.x - ui.x) * t.ex[b] + (uj.y - ui.y) * t.ey[b]) * t.inv_sqrt_xi[b];
    });
}

// Nonlocal force density L with the sign convention rho u'' + L = b, so
// L_n = -sum over incident bonds of the pair force on n. Each node gathers
// over its own incidence list; the two ends of a bond see the same scalar
// with opposite unit vectors, so the pair forces cancel exactly.
inline void nonlocal_force(const BondTable& t, const DamageState& dmg,
                           const std::vector<double>& bond_r, const ModelParams& model,
                           std::vector<Vec2>& L_out, int nthreads) {
    L_out.resize(t.n_nodes);
    parallel_for(t.n_nodes, nthreads, [&](std::size_t n) {
        double fx = 0.0, fy = 0.0;
        for (std::uint32_t k = t.adj_off[n]; k < t.adj_off[n + 1]; ++k) {
            const std::uint32_t b = t.adj_bond[k];
            const double g = dmg.gamma[b];
            if (g == 0.0) continue;
            const double coef = t.fpre[b] * g * force_profile(bond_r[b], model);
            if (t.i[b] == n) {
                fx += coef * t.ex[b];
                fy += coef * t.ey[b];
            } else {
                fx -= coef * t.ex[b];
                fy -= coef * t.ey[b];
            }
        }
        L_out[n] = Vec2{-fx, -fy};
    });
}

inline void add_body_force_to_acceleration(const ParticleGrid& g, const LoadSpec& load,
                                           double inv_rho, std::vector<Vec2>& accel) {
    const double mag = load.node_magnitude(g.eps) * inv_rho;
    for (std::uint32_t n : g.top_strip) accel[n].y += mag;
    for (std::uint32_t n : g.bottom_strip) accel[n].y -= mag;
}

// Materialized body-force field; the hot path applies strips directly.
inline std::vector<Vec2> body_force(const ParticleGrid& g, const LoadSpec& load) {
    std::vector<Vec2> b(g.node_count(), Vec2{});
    const double mag = load.node_magnitude(g.eps);
    for (std::uint32_t n : g.top_strip) b[n].y += mag;
    for (std::uint32_t n : g.bottom_strip) b[n].y -= mag;
    return b;
}

struct StepContext {
    const ParticleGrid& grid;
    const BondTable& bonds;
    const ModelParams& model;
    const DamageParams& damage_params;
    LoadSpec load;
    int nthreads = 1;
};

// Fills state.a from the current displacements (damage state as-is) and
// caches the bond strains. Used once at startup; steps then keep a current.
inline void prime_acceleration(const StepContext& ctx, SimState& state, DamageState& dmg,
                               std::vector<double>& bond_r) {
    compute_bond_strains(ctx.bonds, state.u, bond_r, ctx.nthreads);
    std::vector<Vec2> L;
    nonlocal_force(ctx.bonds, dmg, bond_r, ctx.model, L, ctx.nthreads);
    const double inv_rho = 1.0 / ctx.model.rho;
    parallel_for(state.a.size(), ctx.nthreads,
                 [&](std::size_t n) { state.a[n] = L[n] * (-inv_rho); });
    add_body_force_to_acceleration(ctx.grid, ctx.load, inv_rho, state.a);
}

// One velocity-Verlet step. Force assembly reads the damage state of the
// previous step; the damage sweep then runs on the end-of-step strains, so
// the state labeled n+1 pairs the configuration u_{n+1} with gamma_{n+1}.
// Returns the external-work increment dt * sum b . v_half (midpoint rule).
inline double step_velocity_verlet(const StepContext& ctx, SimState& state, DamageState& dmg,
                                   std::vector<double>& bond_r, std::vector<Vec2>& L_scratch,
                                   double dt) {
    if (dt == 0.0) throw std::invalid_argument("step: dt must be nonzero");
    const double half = 0.5 * dt;
    const std::size_t n_nodes = state.u.size();

    parallel_for(n_nodes, ctx.nthreads, [&](std::size_t n) {
        state.v[n] += state.a[n] * half;  // v_half
        state.u[n] += state.v[n] * dt;
    });

    // External work against the strip load at the midpoint velocity.
    const double mag = ctx.load.node_magnitude(ctx.grid.eps);
    double w_dot = 0.0;
    for (std::uint32_t n : ctx.grid.top_strip) w_dot += state.v[n].y;
    for (std::uint32_t n : ctx.grid.bottom_strip) w_dot -= state.v[n].y;
    const double work_increment = dt * mag * w_dot * ctx.grid.cell_volume();

    compute_bond_strains(ctx.bonds, state.u, bond_r, ctx.nthreads);
    nonlocal_force(ctx.bonds, dmg, bond_r, ctx.model, L_scratch, ctx.nthreads);

    const double inv_rho = 1.0 / ctx.model.rho;
    const double strip_mag = mag * inv_rho;
    parallel_for(n_nodes, ctx.nthreads, [&](std::size_t n) {
        state.a[n] = L_scratch[n] * (-inv_rho);
    });
    for (std::uint32_t n : ctx.grid.top_strip) state.a[n].y += strip_mag;
    for (std::uint32_t n : ctx.grid.bottom_strip) state.a[n].y -= strip_mag;
    parallel_for(n_nodes, ctx.nthreads, [&](std::size_t n) { state.v[n] += state.a[n] * half; });

    state.step += dt > 0.0 ? 1 : -1;
    state.t = state.step * std::abs(dt);

    update_damage(dmg, bond_r, std::abs(dt), state.t, ctx.damage_params, ctx.nthreads);

    // Blow-up guard: displacements beyond the domain diagonal mean the
    // integration has gone unstable.
    const double diag = std::hypot(ctx.grid.Lx, ctx.grid.Ly);
    for (std::size_t n = 0; n < n_nodes; ++n) {
        if (std::abs(state.u[n].x) > diag || std::abs(state.u[n].y) > diag)
            throw BlowupError("integration unstable: |u| exceeded the domain diagonal at step " +
                              std::to_string(state.step));
    }
    return work_increment;
}

// Rough dilatational wave-speed proxy used for the time-step warning.
inline double stable_dt_estimate(const ParticleGrid& g, const ModelParams& model) {
    const double c = std::sqrt(4.0 * model.mu / model.rho);
    return 0.8 * g.h / c;
}

}  // namespace perifrac
