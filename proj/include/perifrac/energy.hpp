#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "perifrac/dynamics.hpp"

namespace perifrac {

// All energies are per unit thickness (2D plane model), in J/m.

inline double kinetic_energy(const ParticleGrid& g, const std::vector<Vec2>& v, double rho,
                             int nthreads) {
    const double cell = g.cell_volume();
    return 0.5 * rho * cell *
           parallel_sum(v.size(), nthreads, [&](std::size_t n) { return dot(v[n], v[n]); });
}

// Double integral of rho^eps gamma g(r) over ordered pairs, realized as
// twice the sum over stored half-bonds.
inline double elastic_energy(const BondTable& t, const DamageState& dmg,
                             const std::vector<double>& bond_r, const ModelParams& model,
                             int nthreads) {
    return 2.0 * parallel_sum(t.bond_count(), nthreads, [&](std::size_t b) {
        const double g = dmg.gamma[b];
        return g == 0.0 ? 0.0 : t.epre[b] * g * potential(bond_r[b], model);
    });
}

inline double damage_energy(const BondTable& t, const DamageState& dmg, const ModelParams& model,
                            int nthreads) {
    return 2.0 * model.g_inf * parallel_sum(t.bond_count(), nthreads, [&](std::size_t b) {
        return t.epre[b] * (1.0 - dmg.gamma[b]);
    });
}

inline double failure_energy(const BondTable& t, const DamageState& dmg, const ModelParams& model,
                             int nthreads) {
    return 2.0 * model.g_inf * parallel_sum(t.bond_count(), nthreads, [&](std::size_t b) {
        return dmg.broken[b] ? t.epre[b] : 0.0;
    });
}

struct LedgerRow {
    double t = 0.0;
    double K = 0.0;
    double E = 0.0;
    double D = 0.0;
    double F = 0.0;
    double W_ext = 0.0;
    double residual = 0.0;
    double bnorm_integral = 0.0;  // int_0^t ||b||_L2 dtau, for the energy bound
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;
    double K0 = 0.0, E0 = 0.0, D0 = 0.0;

    void set_initial(double K, double E, double D) {
        K0 = K;
        E0 = E;
        D0 = D;
    }

    // residual = K + E + D - W_ext - (K0 + E0 + D0); zero in the continuum.
    LedgerRow& push(double t, double K, double E, double D, double F, double W_ext,
                    double bnorm_integral) {
        LedgerRow r;
        r.t = t;
        r.K = K;
        r.E = E;
        r.D = D;
        r.F = F;
        r.W_ext = W_ext;
        r.residual = K + E + D - W_ext - (K0 + E0 + D0);
        r.bnorm_integral = bnorm_integral;
        rows.push_back(r);
        return rows.back();
    }

    double peak_external_work() const {
        double w = 0.0;
        for (const auto& r : rows) w = std::max(w, std::abs(r.W_ext));
        return w;
    }

    double max_abs_residual() const {
        double m = 0.0;
        for (const auto& r : rows) m = std::max(m, std::abs(r.residual));
        return m;
    }
};

inline double balance_residual(const LedgerRow& row) { return row.residual; }

// ||b(t)||_L2 over the strips for the constant strip load.
inline double load_l2_norm(const ParticleGrid& g, const LoadSpec& load) {
    const double mag = load.node_magnitude(g.eps);
    const double n_loaded = static_cast<double>(g.top_strip.size() + g.bottom_strip.size());
    return std::abs(mag) * std::sqrt(n_loaded * g.cell_volume());
}

struct EnergyBoundReport {
    bool holds = true;
    double worst_margin = std::numeric_limits<double>::infinity();  // bound - lhs, minimum over rows
};

// A-priori bound: K + E + D <= (int ||b||/sqrt(rho) + sqrt(K0+E0+D0+1))^2 - 1
// at every snapshot. Violations are reported, not thrown.
inline EnergyBoundReport energy_bound_check(const EnergyLedger& ledger, double rho) {
    EnergyBoundReport rep;
    const double w0 = std::sqrt(ledger.K0 + ledger.E0 + ledger.D0 + 1.0);
    for (const auto& r : ledger.rows) {
        const double rhs = std::pow(r.bnorm_integral / std::sqrt(rho) + w0, 2) - 1.0;
        const double margin = rhs - (r.K + r.E + r.D);
        if (margin < rep.worst_margin) rep.worst_margin = margin;
        if (margin < 0.0) rep.holds = false;
    }
    return rep;
}

}  // namespace perifrac
