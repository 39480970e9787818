#include "fraclap/cli/dispatch.hpp"

#include "fraclap/cli/csv.hpp"
#include "fraclap/control.hpp"
#include "fraclap/errors.hpp"
#include "fraclap/forward.hpp"
#include "fraclap/limitlab.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

namespace fraclap::cli {

namespace {

constexpr double kValidateTolerance = 0.03;
const std::vector<std::size_t> kValidateSizes = {64, 128, 256, 512};


std::string d(double v) { return format_double(v); }

Grid make_grid(const RunConfig& cfg) { return Grid(cfg.x_left, cfg.x_right, cfg.n); }

int run_validate(const RunConfig& cfg, std::ostream& out) {
    const double s = cfg.single_s();
    const auto rows = ball_refinement_study(cfg.x_left, cfg.x_right, s, kValidateSizes);

    out << "forward validation: s = " << s << ", f = 1 on (" << cfg.x_left << ", " << cfg.x_right
        << ") against the closed-form solution\n";
    out << std::setw(8) << "n" << std::setw(16) << "h" << std::setw(16) << "rel_l2_err" << std::setw(16)
        << "u_center" << std::setw(16) << "exact_center" << '\n';
    bool monotone = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << std::setw(8) << r.n << std::setw(16) << std::setprecision(6) << r.h << std::setw(16)
            << r.relative_l2_error << std::setw(16) << r.u_center << std::setw(16) << r.exact_center << '\n';
        if (i > 0 && !(r.relative_l2_error < rows[i - 1].relative_l2_error)) {
            monotone = false;
        }
    }
    const bool accurate = rows.back().relative_l2_error <= kValidateTolerance;
    out << "finest-grid error " << (accurate ? "within" : "ABOVE") << " " << kValidateTolerance * 100
        << "%; refinement " << (monotone ? "monotone" : "NOT monotone") << '\n';
    return accurate && monotone ? kExitOk : kExitAcceptance;
}

int run_solve(const RunConfig& cfg, std::ostream& out) {
    const Grid grid = make_grid(cfg);
    const double s = cfg.single_s();
    const GridFunction f = make_rhs(grid, cfg.rhs);
    const ForwardSolution sol = solve_poisson(assemble_fractional(grid, s), f);

    CsvTable table{{"x", "u", "f"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table.add_row({d(grid.node(i)), d(sol.u[i]), d(sol.f[i])});
    }
    write_file_atomic(cfg.out / "solution.csv", to_csv(table));
    out << "solve: s=" << s << " n=" << grid.size() << " rhs=" << to_string(cfg.rhs)
        << " seminorm_sq=" << d(sol.seminorm_sq) << " l2_norm_u=" << d(sol.l2_norm_u) << '\n';
    return kExitOk;
}

int run_control(const RunConfig& cfg, std::ostream& out) {
    const Grid grid = make_grid(cfg);
    const double s = cfg.single_s();
    const ControlConfig control = cfg.control();
    const PoissonSolver solver(assemble_fractional(grid, s));

    const OptimResult best = eigen_solve_control(solver, control);

    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridFunction start(grid.size());
    for (double& v : start) {
        v = dist(rng);
    }
    const OptimResult pgd = pgd_solve(solver, control, start);

    CsvTable table{{"x", "f_star", "u_star"}, {}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table.add_row({d(grid.node(i)), d(best.f_star[i]), d(best.u_star[i])});
    }
    write_file_atomic(cfg.out / "control.csv", to_csv(table));

    const double gap = pgd.J_star - best.J_star;
    out << "control: s=" << s << " n=" << grid.size() << " J_star=" << d(best.J_star)
        << " lambda_max=" << d(best.lambda_max) << " active_bound=" << to_string(best.active_bound)
        << " J_pgd=" << d(pgd.J_star) << " pgd_gap=" << d(gap) << " pgd_iters=" << pgd.iters
        << " pgd_converged=" << (pgd.converged ? "true" : "false") << '\n';
    return kExitOk;
}

int run_sweep_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SweepConfig sweep{make_grid(cfg), cfg.s_list, cfg.control(), cfg.workers, false};
    const SweepReport report = run_sweep(sweep);

    CsvTable table{{"s", "J_star", "dist_f", "dist_u", "align", "lambda_max", "seminorm_sq", "poincare_c"}, {}};
    bool failed = false;
    for (const SweepRow& r : report.rows) {
        table.add_row({d(r.s), d(r.J_star), d(r.dist_f), d(r.dist_u), d(r.align), d(r.lambda_max),
                       d(r.seminorm_sq), d(r.poincare_c)});
        if (r.error) {
            failed = true;
            err << "sweep: s=" << d(r.s) << " failed: " << *r.error << '\n';
        }
    }
    write_file_atomic(cfg.out / "sweep.csv", to_csv(table));
    out << "sweep: " << report.rows.size() << " rows, classical J_star=" << d(report.reference.J_star)
        << " lambda_max=" << d(report.reference.lambda_max) << '\n';
    return failed ? kExitNumerical : kExitOk;
}

int run_gamma(const RunConfig& cfg, std::ostream& out) {
    const Grid grid = make_grid(cfg);
    const ControlConfig control = cfg.control();
    GridFunction f = make_rhs(grid, cfg.rhs);
    f *= 0.5 * (cfg.a + cfg.b) / norm_h(f, grid);
    const double amplitude = 0.1 * norm_h(f, grid);

    const GammaCheckReport recovery = recovery_sequence_check(grid, f, cfg.s_list, control);
    const GammaCheckReport liminf = liminf_check(grid, f, amplitude, cfg.s_list, control);

    CsvTable table{{"clause", "index", "s", "F_s", "F", "margin"}, {}};
    for (std::size_t i = 0; i < recovery.recovery_rows.size(); ++i) {
        const auto& r = recovery.recovery_rows[i];
        table.add_row({"recovery", std::to_string(i + 1), d(r.s), d(r.F_s), d(r.F), d(r.gap)});
    }
    for (const auto& r : liminf.liminf_rows) {
        table.add_row({"liminf", std::to_string(r.k), d(r.s), d(r.F_k), d(r.F), d(r.margin)});
    }
    write_file_atomic(cfg.out / "gamma.csv", to_csv(table));
    out << "gamma: recovery " << (recovery.recovery_passed.value_or(false) ? "PASS" : "FAIL") << ", liminf "
        << (liminf.liminf_passed.value_or(false) ? "PASS" : "FAIL") << '\n';
    return kExitOk;
}

}  // namespace

Subcommand parse_subcommand(std::string_view name) {
    if (name == "validate") {
        return Subcommand::validate;
    }
    if (name == "solve") {
        return Subcommand::solve;
    }
    if (name == "control") {
        return Subcommand::control;
    }
    if (name == "sweep") {
        return Subcommand::sweep;
    }
    if (name == "gamma") {
        return Subcommand::gamma;
    }
    throw ConfigError("unknown subcommand '" + std::string(name) + "'");
}

int dispatch(const RunConfig& cfg, Subcommand command, std::ostream& out, std::ostream& err) {
    try {
        validate(cfg);
        switch (command) {
            case Subcommand::validate:
                return run_validate(cfg, out);
            case Subcommand::solve:
                return run_solve(cfg, out);
            case Subcommand::control:
                return run_control(cfg, out);
            case Subcommand::sweep:
                return run_sweep_command(cfg, out, err);
            case Subcommand::gamma:
                return run_gamma(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const DomainError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitConfig;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fractional Laplacian optimal control: solves, sweeps and s -> 1 limit checks", "fraclap"};
    std::string command;
    std::string config_path;
    std::string out_dir;
    app.add_option("command", command, "validate | solve | control | sweep | gamma")
        ->required()
        ->check(CLI::IsMember({"validate", "solve", "control", "sweep", "gamma"}));
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_dir, "output directory");

    const std::vector<std::string> override_keys = {"n", "s", "mu", "a", "b", "tol", "workers", "seed"};
    std::map<std::string, std::string> overrides;
    std::vector<CLI::Option*> override_opts;
    for (const auto& key : override_keys) {
        override_opts.push_back(app.add_option("--" + key, overrides[key], "override '" + key + "'"));
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kExitConfig;
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                throw ConfigError("cannot read config file '" + config_path + "'");
            }
            std::stringstream buffer;
            buffer << in.rdbuf();
            cfg = parse_config(buffer.str());
        }
        for (std::size_t i = 0; i < override_keys.size(); ++i) {
            if (override_opts[i]->count() > 0) {
                apply_setting(cfg, override_keys[i], overrides[override_keys[i]]);
            }
        }
        if (!out_dir.empty()) {
            apply_setting(cfg, "out", out_dir);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    return dispatch(cfg, parse_subcommand(command), out, err);
}

}  // namespace fraclap::cli
