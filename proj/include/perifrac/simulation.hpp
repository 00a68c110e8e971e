#pragma once

#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "perifrac/analysis.hpp"
#include "perifrac/config.hpp"
#include "perifrac/io.hpp"

namespace perifrac {

struct RunOptions {
    int nthreads = 0;                   // 0 = hardware concurrency
    bool write_outputs = true;          // emit CSV files into config.out_dir
    long snapshot_every_override = -1;  // >= 0 replaces config.snapshot_every
    std::ostream* log = nullptr;        // progress / warning sink
};

// Owns one simulation run: grid, bonds, damage, state, ledger. Deterministic
// for a fixed config and thread count (fixed-order reductions throughout).
class Simulation {
  public:
    Simulation(const RunConfig& cfg, const RunOptions& opt = {})
        : cfg_(cfg),
          nthreads_(opt.nthreads > 0 ? opt.nthreads : default_threads()),
          log_(opt.log),
          write_outputs_(opt.write_outputs) {
        cfg_.validate();
        if (opt.snapshot_every_override >= 0) cfg_.snapshot_every = opt.snapshot_every_override;
        cfg_hash_ = config_hash(cfg_);

        grid_ = build_grid(cfg_.domain);
        bonds_ = build_bond_table(grid_);
        model_ = calibrate(cfg_.material, cfg_.domain.eps, 2, cfg_.r_break_factor);
        damage_params_ = make_damage_params(
            model_, cfg_.damage_form == 1 ? DamageForm::time_integral : DamageForm::max_strain,
            cfg_.x_D, cfg_.r_D_minus_r_plus);
        damage_ = DamageState(bonds_.bond_count());
        if (cfg_.notch) {
            PreNotch notch{*cfg_.notch};
            apply_prenotch(grid_, bonds_, notch, damage_);
        }
        state_.resize(grid_.node_count());

        if (log_ && cfg_.dt > stable_dt_estimate(grid_, model_)) {
            *log_ << "warning: dt = " << cfg_.dt << " s exceeds the wave-speed estimate "
                  << stable_dt_estimate(grid_, model_) << " s; watch the balance residual\n";
        }

        prime_acceleration(ctx(), state_, damage_, bond_r_);
        load_l2_ = load_l2_norm(grid_, cfg_.load);

        const double K0 = kinetic_energy(grid_, state_.v, model_.rho, nthreads_);
        const double E0 = elastic_energy(bonds_, damage_, bond_r_, model_, nthreads_);
        const double D0 = damage_energy(bonds_, damage_, model_, nthreads_);
        ledger_.set_initial(K0, E0, D0);
        record_row();
        record_crack();
    }

    StepContext ctx() const {
        return StepContext{grid_, bonds_, model_, damage_params_, cfg_.load, nthreads_};
    }

    void step() {
        const StepContext c = ctx();
        w_ext_ += step_velocity_verlet(c, state_, damage_, bond_r_, force_scratch_, cfg_.dt);
        bnorm_int_ += cfg_.dt * load_l2_;
    }

    // Runs to t_end, recording ledger rows (and optional field snapshots) at
    // the snapshot cadence plus the final step.
    void run() {
        const long nsteps = cfg_.step_count();
        for (long s = 1; s <= nsteps; ++s) {
            step();
            const bool cadence = cfg_.snapshot_every > 0 && s % cfg_.snapshot_every == 0;
            if (cadence || s == nsteps) {
                record_row();
                record_crack();
                if (write_outputs_ && cfg_.write_snapshots) write_snapshot();
            }
        }
        if (write_outputs_) write_summary_files();
    }

    void record_row() {
        const double K = kinetic_energy(grid_, state_.v, model_.rho, nthreads_);
        const double E = elastic_energy(bonds_, damage_, bond_r_, model_, nthreads_);
        const double D = damage_energy(bonds_, damage_, model_, nthreads_);
        const double F = failure_energy(bonds_, damage_, model_, nthreads_);
        ledger_.push(state_.t, K, E, D, F, w_ext_, bnorm_int_);
    }

    void record_crack() {
        if (!cfg_.write_crack) return;
        const std::vector<double> phi = damage_index(bonds_, damage_, nthreads_);
        const double notch_end = cfg_.notch ? std::max(cfg_.notch->a.x, cfg_.notch->b.x) : 0.0;
        const CrackPath path = extract_crack_path(grid_, phi, crack_phi_threshold_, notch_end);
        CrackRow row;
        row.t = state_.t;
        row.component_count = path.has_crack ? std::max(path.arm_count, 1) : 0;
        row.tip_x = path.has_crack ? path.tip.x : 0.0;
        row.tip_y = path.has_crack ? path.tip.y : 0.0;
        crack_rows_.push_back(row);
    }

    void write_snapshot() {
        const FieldSnapshot s =
            make_snapshot(grid_, bonds_, damage_, bond_r_, model_, state_.t, nthreads_);
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%08ld.csv", state_.step);
        write_snapshot_csv(std::filesystem::path(cfg_.out_dir) / name, grid_, state_.u, s,
                           cfg_hash_);
    }

    void write_summary_files() const {
        const std::filesystem::path dir(cfg_.out_dir);
        if (cfg_.write_ledger) write_ledger_csv(dir / "ledger.csv", ledger_, cfg_hash_);
        if (cfg_.write_crack) write_crack_csv(dir / "crack.csv", crack_rows_, cfg_hash_);
    }

    const RunConfig& config() const { return cfg_; }
    const ParticleGrid& grid() const { return grid_; }
    const BondTable& bonds() const { return bonds_; }
    const ModelParams& model() const { return model_; }
    const DamageParams& damage_params() const { return damage_params_; }
    DamageState& damage() { return damage_; }
    const DamageState& damage() const { return damage_; }
    SimState& state() { return state_; }
    const SimState& state() const { return state_; }
    const std::vector<double>& bond_strains() const { return bond_r_; }
    const EnergyLedger& ledger() const { return ledger_; }
    const std::vector<CrackRow>& crack_rows() const { return crack_rows_; }
    std::uint64_t cfg_hash() const { return cfg_hash_; }
    double external_work() const { return w_ext_; }
    int nthreads() const { return nthreads_; }
    double crack_phi_threshold() const { return crack_phi_threshold_; }
    void set_crack_phi_threshold(double v) { crack_phi_threshold_ = v; }

  private:
    RunConfig cfg_;
    int nthreads_;
    std::ostream* log_;
    bool write_outputs_;
    std::uint64_t cfg_hash_ = 0;

    ParticleGrid grid_;
    BondTable bonds_;
    ModelParams model_;
    DamageParams damage_params_;
    DamageState damage_;
    SimState state_;
    std::vector<double> bond_r_;
    std::vector<Vec2> force_scratch_;
    EnergyLedger ledger_;
    std::vector<CrackRow> crack_rows_;
    double w_ext_ = 0.0;
    double bnorm_int_ = 0.0;
    double load_l2_ = 0.0;
    double crack_phi_threshold_ = 0.35;
};

// --- Horizon refinement study ----------------------------------------------

struct RefinementResult {
    std::vector<double> eps_list;
    std::vector<double> l2_diffs;  // ||u^{eps_k} - u^{eps_{k+1}}||_{L2}, coarse-grid sampling
};

namespace detail {

// Nearest-node sampling of u onto the points of the coarse grid.
inline std::vector<Vec2> sample_to_coarse(const ParticleGrid& coarse, const ParticleGrid& fine,
                                          const std::vector<Vec2>& u_fine) {
    std::vector<Vec2> out(coarse.node_count());
    for (std::size_t n = 0; n < coarse.node_count(); ++n) {
        const Vec2& p = coarse.pos[n];
        int ix = static_cast<int>(std::floor(p.x / fine.h));
        int iy = static_cast<int>(std::floor(p.y / fine.h));
        ix = std::clamp(ix, 0, fine.nx - 1);
        iy = std::clamp(iy, 0, fine.ny - 1);
        out[n] = u_fine[fine.index(ix, iy)];
    }
    return out;
}

}  // namespace detail

// Runs the same physical problem for each horizon in eps_list (fixed eps/h)
// and reports successive L2 displacement differences at t_end, sampled onto
// the coarsest grid.
inline RefinementResult horizon_refinement_study(const RunConfig& base,
                                                 const std::vector<double>& eps_list,
                                                 double eps_over_h, const RunOptions& opt = {}) {
    if (eps_list.size() < 2)
        throw std::invalid_argument("refinement study: need at least two horizons");
    for (std::size_t k = 1; k < eps_list.size(); ++k)
        if (!(eps_list[k] < eps_list[k - 1]))
            throw std::invalid_argument("refinement study: eps_list must strictly decrease");

    RefinementResult res;
    res.eps_list = eps_list;

    ParticleGrid coarse;
    std::vector<std::vector<Vec2>> sampled;
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        RunConfig cfg = base;
        cfg.domain.eps = eps_list[k];
        cfg.domain.h = eps_list[k] / eps_over_h;
        cfg.write_ledger = cfg.write_snapshots = cfg.write_crack = false;
        RunOptions ro = opt;
        ro.write_outputs = false;
        Simulation sim(cfg, ro);
        sim.run();
        if (k == 0) coarse = sim.grid();
        sampled.push_back(detail::sample_to_coarse(coarse, sim.grid(), sim.state().u));
    }

    const double cell = coarse.cell_volume();
    for (std::size_t k = 0; k + 1 < sampled.size(); ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < coarse.node_count(); ++n) {
            const Vec2 d = sampled[k][n] - sampled[k + 1][n];
            acc += dot(d, d);
        }
        res.l2_diffs.push_back(std::sqrt(acc * cell));
    }
    return res;
}

}  // namespace perifrac
