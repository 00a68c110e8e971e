#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "perifrac/bonds.hpp"
#include "perifrac/parallel.hpp"

namespace perifrac {

// Smooth cutoff: 1 for x <= onset, 0 for x >= end, cubic smoothstep between.
// A degenerate window (end == onset) is the instant-break step function.
inline double h_profile(double x, double x_onset, double x_end) {
    if (x_end < x_onset) throw std::invalid_argument("h_profile: x_end < x_onset");
    if (x <= x_onset) return 1.0;
    if (x >= x_end) return 0.0;
    const double s = (x - x_onset) / (x_end - x_onset);
    return 1.0 - 3.0 * s * s + 2.0 * s * s * s;
}

enum class DamageForm {
    time_integral = 1,  // gamma = h( int (r - r^+)^+ dt )
    max_strain = 2,     // gamma = h( max_t r )
};

struct DamageParams {
    DamageForm form = DamageForm::max_strain;
    double r_plus = 0.0;  // onset threshold r^+ [sqrt(m)], normally r_break
    double x_D = 0.0;     // form 1 window; 0 means instant break
    double r_D = 0.0;     // form 2 full-break level; r_D == r_plus means instant break
};

inline DamageParams make_damage_params(const ModelParams& model, DamageForm form = DamageForm::max_strain,
                                       double x_D = 0.0, double r_D_minus_r_plus = 0.0) {
    if (x_D < 0.0 || r_D_minus_r_plus < 0.0)
        throw std::invalid_argument("damage: degradation windows must be nonnegative");
    DamageParams d;
    d.form = form;
    d.r_plus = model.r_break;
    d.x_D = x_D;
    d.r_D = model.r_break + r_D_minus_r_plus;
    return d;
}

// Per-bond irreversible degradation state. gamma is non-increasing in time;
// a bond with gamma at (numerical) zero is broken and stays broken.
struct DamageState {
    static constexpr double kBrokenTol = 1e-12;

    std::vector<double> gamma;
    std::vector<double> acc;  // form 1: time integral A; form 2: running max r*
    std::vector<std::uint8_t> broken;
    std::vector<std::uint8_t> degraded_this_step;
    std::vector<double> break_time;

    explicit DamageState(std::size_t n_bonds = 0) { reset(n_bonds); }

    void reset(std::size_t n_bonds) {
        gamma.assign(n_bonds, 1.0);
        acc.assign(n_bonds, 0.0);
        broken.assign(n_bonds, 0);
        degraded_this_step.assign(n_bonds, 0);
        break_time.assign(n_bonds, std::numeric_limits<double>::quiet_NaN());
    }

    std::size_t broken_count() const {
        std::size_t n = 0;
        for (auto b : broken) n += b;
        return n;
    }
};

inline void update_bond_damage(DamageState& st, std::size_t b, double r, double dt, double t_now,
                               const DamageParams& p) {
    st.degraded_this_step[b] = 0;
    if (st.broken[b]) return;
    double gamma_new;
    if (p.form == DamageForm::time_integral) {
        const double over = r - p.r_plus;
        if (over > 0.0) st.acc[b] += dt * over;
        gamma_new = h_profile(st.acc[b], 0.0, p.x_D);
    } else {
        if (r > st.acc[b]) st.acc[b] = r;
        gamma_new = h_profile(st.acc[b], p.r_plus, p.r_D);
    }
    if (gamma_new < st.gamma[b]) {
        st.gamma[b] = gamma_new;
        st.degraded_this_step[b] = 1;
        if (gamma_new <= DamageState::kBrokenTol) {
            st.gamma[b] = 0.0;
            st.broken[b] = 1;
            st.break_time[b] = t_now;
        }
    }
}

// Bond-parallel damage sweep over the cached strains of the current step.
inline void update_damage(DamageState& st, const std::vector<double>& bond_r, double dt, double t_now,
                          const DamageParams& p, int nthreads) {
    parallel_for(bond_r.size(), nthreads,
                 [&](std::size_t b) { update_bond_damage(st, b, bond_r[b], dt, t_now, p); });
}

// Marks every bond properly crossing the notch as broken at t = 0.
inline void apply_prenotch(const ParticleGrid& g, const BondTable& t, const PreNotch& notch,
                           DamageState& st) {
    notch.validate(g);
    for (std::uint32_t b : bonds_crossing_segment(g, t, notch.seg)) {
        st.gamma[b] = 0.0;
        st.broken[b] = 1;
        st.break_time[b] = 0.0;
    }
}

struct DamageZones {
    std::vector<std::uint32_t> failure_set;     // broken bonds
    std::vector<std::uint32_t> process_zone;    // gamma decreased this step, not broken
    std::vector<std::uint32_t> softening_zone;  // unbroken with r_c <= r < r_break
};

inline DamageZones classify_zones(const DamageState& st, const std::vector<double>& bond_r,
                                  const ModelParams& model) {
    DamageZones z;
    for (std::size_t b = 0; b < st.gamma.size(); ++b) {
        if (st.broken[b]) {
            z.failure_set.push_back(static_cast<std::uint32_t>(b));
        } else if (st.degraded_this_step[b]) {
            z.process_zone.push_back(static_cast<std::uint32_t>(b));
        } else if (bond_r[b] >= model.r_c && bond_r[b] < model.r_break) {
            z.softening_zone.push_back(static_cast<std::uint32_t>(b));
        }
    }
    return z;
}

// Nodal damage index: weighted broken fraction of the incident bonds.
inline std::vector<double> damage_index(const BondTable& t, const DamageState& st, int nthreads) {
    std::vector<double> phi(t.n_nodes, 0.0);
    parallel_for(t.n_nodes, nthreads, [&](std::size_t n) {
        double num = 0.0, den = 0.0;
        for (std::uint32_t k = t.adj_off[n]; k < t.adj_off[n + 1]; ++k) {
            const std::uint32_t b = t.adj_bond[k];
            den += t.w[b];
            if (st.broken[b]) num += t.w[b];
        }
        phi[n] = den > 0.0 ? num / den : 1.0;
    });
    return phi;
}

}  // namespace perifrac
