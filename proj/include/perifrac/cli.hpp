#pragma once

#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "perifrac/perifrac.hpp"

namespace perifrac {

// Exit codes: 0 success, 1 check failure or run error, 2 usage error.

namespace cli_detail {

inline MaterialConstants default_material() {
    // Soda-lime-glass-like benchmark material used by the shipped recipes.
    MaterialConstants m;
    m.E = 72e9;
    m.nu = 0.33;
    m.rho = 2440.0;
    m.Gc = 135.0;
    return m;
}

inline int cmd_calibrate(const std::string& config_path, std::ostream& out) {
    MaterialConstants mat = default_material();
    double eps = 0.006;
    double L = 0.96;
    double r_break_factor = 3.0;
    if (!config_path.empty()) {
        const RunConfig cfg = parse_config(config_path);
        mat = cfg.material;
        eps = cfg.domain.eps;
        L = cfg.domain.L;
        r_break_factor = cfg.r_break_factor;
    }
    const ModelParams p = calibrate(mat, eps, 2, r_break_factor);
    const double gc_rt = fracture_toughness_quadrature(p, 2);
    const Moduli mm = effective_moduli(p, 2);

    out << std::setprecision(10);
    out << "calibrated model (d=2, exponential profile)\n"
        << "  g_inf     = " << p.g_inf << " J/m^2\n"
        << "  beta      = " << p.beta << " 1/m\n"
        << "  r_c       = " << p.r_c << " sqrt(m)\n"
        << "  r_break   = " << p.r_break << " sqrt(m)  (factor " << r_break_factor << ")\n"
        << "  mu=lambda = " << p.mu << " Pa  (effective nu = 0.25 under mu = lambda)\n"
        << "  horizon   = " << p.horizon << " m\n"
        << "identities\n"
        << "  toughness quadrature: " << gc_rt << " J/m^2 vs Gc = " << mat.Gc
        << "  (rel err " << std::abs(gc_rt - mat.Gc) / mat.Gc << ")\n"
        << "  moduli quadrature:    " << mm.mu << " Pa vs mu = " << p.mu << "  (rel err "
        << std::abs(mm.mu - p.mu) / p.mu << ")\n"
        << "  beta*g_inf / (48 mu) = " << p.beta * p.g_inf / (48.0 * p.mu) << "\n"
        << "  L*beta               = " << dimensionless_beta(L, p) << "  (L = " << L << " m)\n";
    return 0;
}

inline int cmd_run(const std::string& config_path, int threads, const std::string& out_dir,
                   long snapshot_every, std::ostream& out, std::ostream& err) {
    RunConfig cfg = parse_config(config_path);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    RunOptions opt;
    opt.nthreads = threads;
    opt.snapshot_every_override = snapshot_every;
    opt.log = &err;
    try {
        Simulation sim(cfg, opt);
        out << "running " << sim.grid().nx << "x" << sim.grid().ny << " nodes, "
            << sim.bonds().bond_count() << " bonds, " << cfg.step_count() << " steps\n";
        sim.run();
        const LedgerRow& last = sim.ledger().rows.back();
        const double wref = sim.ledger().peak_external_work();
        out << std::setprecision(6) << "done: t = " << last.t << " s, broken bonds = "
            << sim.damage().broken_count() << "\n"
            << "  K = " << last.K << "  E = " << last.E << "  D = " << last.D
            << "  F = " << last.F << "  W_ext = " << last.W_ext << "  (J/m)\n"
            << "  |residual| / peak W_ext = "
            << (wref > 0.0 ? sim.ledger().max_abs_residual() / wref : 0.0) << "\n"
            << "  outputs in " << cfg.out_dir << "\n";
        return 0;
    } catch (const BlowupError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int cmd_check_griffith(const std::string& config_path, double length, double eps,
                              double eps_over_h, bool full_span, bool refine, std::ostream& out) {
    MaterialConstants mat = default_material();
    if (!config_path.empty()) mat = parse_config(config_path).material;

    GriffithOptions opt;
    opt.eps = eps;
    opt.eps_over_h = eps_over_h;
    opt.full_span = full_span;
    const GriffithResult base = griffith_flat_crack_check(mat, length, opt);
    out << std::setprecision(6) << "griffith flat crack: ell = " << length << " m, eps = " << opt.eps
        << " m, eps/h = " << opt.eps_over_h << "\n"
        << "  severed bonds  = " << base.bonds_broken << "\n"
        << "  F (window)     = " << base.f_window << " J/m over " << base.window_length << " m\n"
        << "  Gc * length    = " << base.target << " J/m\n"
        << "  rel error      = " << base.rel_error << "\n";
    bool ok = base.rel_error <= 0.05;
    if (refine) {
        GriffithOptions half = opt;
        half.eps = 0.5 * opt.eps;
        const GriffithResult fine = griffith_flat_crack_check(mat, length, half);
        out << "  refined (eps = " << half.eps << " m): rel error = " << fine.rel_error << "\n";
        // Halving eps at fixed eps/h must not grow the error.
        ok = ok && fine.rel_error <= base.rel_error + 5e-3;
    }
    out << (ok ? "PASS" : "FAIL") << ": tolerance 5%\n";
    return ok ? 0 : 1;
}

inline int cmd_check_elastic(const std::string& config_path, double eps, std::ostream& out) {
    MaterialConstants mat = default_material();
    if (!config_path.empty()) mat = parse_config(config_path).material;
    const ModelParams model = calibrate(mat, eps, 2);

    const double a = 1e-5;
    const double dil[2][2] = {{a, 0.0}, {0.0, a}};
    const double shear[2][2] = {{0.0, a}, {a, 0.0}};

    bool ok = true;
    double prev_worst = 0.0;
    out << std::setprecision(6) << "quiescent elasticity, eps = " << eps << " m\n";
    for (double eh : {6.0, 12.0}) {
        const QuiescentResult d = quiescent_elasticity_check(dil, eps, eh, model);
        const QuiescentResult s = quiescent_elasticity_check(shear, eps, eh, model);
        const double worst = std::max(d.rel_error, s.rel_error);
        out << "  eps/h = " << eh << ": dilation rel err = " << d.rel_error
            << ", shear rel err = " << s.rel_error << "\n";
        if (eh == 6.0) {
            ok = ok && worst <= 0.03;
            prev_worst = worst;
        } else {
            ok = ok && worst <= prev_worst;
        }
    }
    out << (ok ? "PASS" : "FAIL") << ": tolerance 3% at eps/h = 6, improving at eps/h = 12\n";
    return ok ? 0 : 1;
}

inline int cmd_check_balance(const std::string& config_path, int threads, std::ostream& out,
                             std::ostream& err) {
    RunConfig cfg = parse_config(config_path);
    cfg.write_ledger = cfg.write_snapshots = cfg.write_crack = false;
    RunOptions opt;
    opt.nthreads = threads;
    opt.write_outputs = false;
    opt.log = &err;

    auto residual_fraction = [&](const RunConfig& c) {
        Simulation sim(c, opt);
        sim.run();
        const double peak = sim.ledger().peak_external_work();
        return peak > 0.0 ? sim.ledger().max_abs_residual() / peak : 0.0;
    };

    const double frac = residual_fraction(cfg);
    RunConfig half = cfg;
    half.dt = 0.5 * cfg.dt;
    const double frac_half = residual_fraction(half);

    out << std::setprecision(6) << "energy balance audit over " << cfg.step_count() << " steps\n"
        << "  |residual| / peak W_ext at dt   = " << frac << "\n"
        << "  |residual| / peak W_ext at dt/2 = " << frac_half << "\n"
        << "  shrink factor                   = " << (frac_half > 0.0 ? frac / frac_half : 1e300)
        << "\n";
    const bool ok = frac <= 5e-3 && frac_half * 2.0 <= frac;
    out << (ok ? "PASS" : "FAIL") << ": residual <= 0.5% of peak work, halving dt shrinks >= 2x\n";
    return ok ? 0 : 1;
}

inline int cmd_refine_horizon(const std::string& config_path, const std::string& eps_csv,
                              int threads, std::ostream& out, std::ostream& err) {
    RunConfig cfg = parse_config(config_path);
    std::vector<double> eps_list;
    if (!eps_csv.empty()) {
        std::stringstream ss(eps_csv);
        std::string item;
        while (std::getline(ss, item, ',')) eps_list.push_back(std::stod(item));
    } else {
        eps_list = {4.0 * cfg.domain.eps, 2.0 * cfg.domain.eps, cfg.domain.eps};
    }
    const double eps_over_h = cfg.domain.eps / cfg.domain.h;
    RunOptions opt;
    opt.nthreads = threads;
    opt.write_outputs = false;
    opt.log = &err;
    const RefinementResult res = horizon_refinement_study(cfg, eps_list, eps_over_h, opt);

    out << std::setprecision(6) << "horizon refinement (fixed eps/h = " << eps_over_h << ")\n";
    bool ok = true;
    for (std::size_t k = 0; k < res.l2_diffs.size(); ++k) {
        out << "  ||u(eps=" << res.eps_list[k] << ") - u(eps=" << res.eps_list[k + 1]
            << ")||_L2 = " << res.l2_diffs[k] << "\n";
        if (k > 0) ok = ok && res.l2_diffs[k] < res.l2_diffs[k - 1];
    }
    out << (ok ? "PASS" : "FAIL") << ": successive differences decrease\n";
    return ok ? 0 : 1;
}

}  // namespace cli_detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"perifrac: 2D bond-based peridynamic fracture simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir, eps_csv;
    int threads = 0;
    long snapshot_every = -1;
    double length = 0.24, eps = 0.012, eps_over_h = 6.0;
    bool full_span = false, refine = false;

    auto* calibrate_cmd = app.add_subcommand("calibrate", "print calibrated model constants");
    calibrate_cmd->add_option("--config", config_path, "run configuration file");

    auto* run_cmd = app.add_subcommand("run", "run a simulation from a config file");
    run_cmd->add_option("--config", config_path, "run configuration file")->required();
    run_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
    run_cmd->add_option("--out", out_dir, "output directory override");
    run_cmd->add_option("--snapshot-every", snapshot_every, "steps between ledger rows");

    auto* griffith_cmd =
        app.add_subcommand("check-griffith", "flat-crack failure energy vs Gc * length");
    griffith_cmd->add_option("--config", config_path, "material source (default: glass benchmark)");
    griffith_cmd->add_option("--length", length, "segment length in m (default 0.24)");
    griffith_cmd->add_option("--eps", eps, "horizon in m (default 0.012)");
    griffith_cmd->add_option("--eps-over-h", eps_over_h, "horizon over spacing (default 6)");
    griffith_cmd->add_flag("--full-span", full_span, "compare over the full segment incl. end caps");
    griffith_cmd->add_flag("--refine", refine, "also run with eps halved at fixed eps/h");

    auto* elastic_cmd =
        app.add_subcommand("check-elastic", "affine-field energy density vs closed form");
    elastic_cmd->add_option("--config", config_path, "material source (default: glass benchmark)");
    elastic_cmd->add_option("--eps", eps, "horizon in m (default 0.012)");

    auto* balance_cmd =
        app.add_subcommand("check-balance", "energy balance residual and dt-halving study");
    balance_cmd->add_option("--config", config_path, "run configuration file")->required();
    balance_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    auto* refine_cmd =
        app.add_subcommand("refine-horizon", "L2 displacement differences across horizons");
    refine_cmd->add_option("--config", config_path, "run configuration file")->required();
    refine_cmd->add_option("--eps-list", eps_csv, "comma-separated horizons, decreasing");
    refine_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (calibrate_cmd->parsed()) return cli_detail::cmd_calibrate(config_path, out);
        if (run_cmd->parsed())
            return cli_detail::cmd_run(config_path, threads, out_dir, snapshot_every, out, err);
        if (griffith_cmd->parsed())
            return cli_detail::cmd_check_griffith(config_path, length, eps, eps_over_h, full_span,
                                                  refine, out);
        if (elastic_cmd->parsed()) return cli_detail::cmd_check_elastic(config_path, eps, out);
        if (balance_cmd->parsed()) return cli_detail::cmd_check_balance(config_path, threads, out, err);
        if (refine_cmd->parsed())
            return cli_detail::cmd_refine_horizon(config_path, eps_csv, threads, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << app.help();
    return 2;
}

}  // namespace perifrac
