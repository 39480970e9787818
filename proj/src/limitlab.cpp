#include "fraclap/limitlab.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace fraclap {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

template <typename Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                fn(i);
            }
        });
    }
}

SweepRow failed_row(double s, std::string message) {
    SweepRow row;
    row.s = s;
    row.J_star = row.dist_f = row.dist_u = row.align = kNaN;
    row.lambda_max = row.seminorm_sq = row.poincare_c = row.J_pgd = kNaN;
    row.error = std::move(message);
    return row;
}

bool tail_non_increasing(const std::vector<double>& values, std::size_t tail) {
    const std::size_t n = values.size();
    const std::size_t first = n > tail ? n - tail : 0;
    for (std::size_t i = first + 1; i < n; ++i) {
        if (values[i] > values[i - 1]) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::vector<double> geometric_ladder(std::size_t k_max) {
    std::vector<double> out;
    out.reserve(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        out.push_back(1.0 - std::ldexp(1.0, -static_cast<int>(k)));
    }
    return out;
}

void validate_ladder(const std::vector<double>& s_list) {
    if (s_list.empty()) {
        throw ConfigError("s_list must not be empty");
    }
    for (std::size_t i = 0; i < s_list.size(); ++i) {
        if (!(s_list[i] > 0.0 && s_list[i] < 1.0)) {
            throw ConfigError("s_list entry " + std::to_string(s_list[i]) + " outside (0,1)");
        }
        if (i > 0 && !(s_list[i] > s_list[i - 1])) {
            throw ConfigError("s_list must be strictly ascending");
        }
    }
}

SweepReport run_sweep(const SweepConfig& cfg) {
    validate_ladder(cfg.s_list);
    cfg.control.validate();

    const Grid& grid = cfg.grid;
    SweepReport report;
    {
        const PoissonSolver classical(assemble_classical(grid));
        report.reference = eigen_solve_control(classical, cfg.control);
        report.reference_poincare_c = poincare_constant(classical.op());
    }
    const OptimResult& ref = report.reference;
    const double ref_norm = norm_h(ref.f_star, grid);

    report.rows.resize(cfg.s_list.size());
    parallel_for(cfg.s_list.size(), cfg.workers, [&](std::size_t i) {
        const double s = cfg.s_list[i];
        try {
            const PoissonSolver solver(assemble_fractional(grid, s));
            const OptimResult opt = eigen_solve_control(solver, cfg.control);

            SweepRow row;
            row.s = s;
            row.J_star = opt.J_star;
            row.dist_f = norm_h(opt.f_star - ref.f_star, grid);
            row.dist_u = norm_h(opt.u_star - ref.u_star, grid);
            const double norm = norm_h(opt.f_star, grid);
            row.align = norm > 0.0 && ref_norm > 0.0
                            ? std::min(1.0, std::abs(inner_product_h(opt.f_star, ref.f_star, grid)) / (norm * ref_norm))
                            : 0.0;
            row.lambda_max = opt.lambda_max;
            row.seminorm_sq = inner_product_h(opt.f_star, opt.u_star, grid);
            row.poincare_c = poincare_constant(solver.op());
            row.J_pgd = cfg.pgd_cross_check ? pgd_solve(solver, cfg.control).J_star : kNaN;
            report.rows[i] = std::move(row);
        } catch (const std::exception& e) {
            report.rows[i] = failed_row(s, e.what());
        }
    });

    std::sort(report.rows.begin(), report.rows.end(),
              [](const SweepRow& x, const SweepRow& y) { return x.s < y.s; });
    return report;
}

StateConvergenceReport state_convergence_check(const Grid& grid, const GridFunction& f,
                                               const std::vector<double>& s_list) {
    validate_ladder(s_list);
    StateConvergenceReport report;
    report.reference = solve_poisson(assemble_classical(grid), f);
    const double ref_norm = report.reference.l2_norm_u;

    for (double s : s_list) {
        const ForwardSolution sol = solve_poisson(assemble_fractional(grid, s), f);
        StateConvergenceRow row;
        row.s = s;
        row.dist_u = norm_h(sol.u - report.reference.u, grid);
        row.relative_dist_u = ref_norm > 0.0 ? row.dist_u / ref_norm : 0.0;
        row.seminorm_sq = sol.seminorm_sq;
        row.seminorm_gap = std::abs(sol.seminorm_sq - report.reference.seminorm_sq);
        report.rows.push_back(row);
    }
    return report;
}

BbmReport bbm_limit_check(const Grid& grid, const GridFunction& v, const std::vector<double>& s_list) {
    validate_ladder(s_list);
    BbmReport report;
    report.classical_energy = quadratic_form(assemble_classical(grid), v);
    for (double s : s_list) {
        const double value = quadratic_form(assemble_fractional(grid, s), v);
        report.rows.push_back({s, value, std::abs(value - report.classical_energy)});
    }
    return report;
}

double extended_cost(const PoissonSolver& solver, const GridFunction& f, const ControlConfig& cfg) {
    const double norm = norm_h(f, solver.grid());
    const double slack = 1e-12 * std::max(1.0, cfg.b);
    if (norm < cfg.a - slack || norm > cfg.b + slack) {
        return kInf;
    }
    return reduced_cost(solver, f, cfg.mu);
}

GammaCheckReport recovery_sequence_check(const Grid& grid, const GridFunction& f,
                                         const std::vector<double>& s_list, const ControlConfig& cfg,
                                         const GammaTolerances& tolerances) {
    validate_ladder(s_list);
    cfg.validate();
    const double limit = extended_cost(PoissonSolver(assemble_classical(grid)), f, cfg);

    GammaCheckReport report;
    std::vector<double> gaps;
    for (double s : s_list) {
        const double value = extended_cost(PoissonSolver(assemble_fractional(grid, s)), f, cfg);
        const double gap = value == limit ? 0.0 : std::abs(value - limit);
        report.recovery_rows.push_back({s, value, limit, gap});
        gaps.push_back(gap);
    }

    const double last_relative =
        std::isinf(limit) ? gaps.back() : (limit > 0.0 ? gaps.back() / limit : gaps.back());
    report.recovery_passed = tail_non_increasing(gaps, 3) && last_relative <= tolerances.recovery_relative;
    return report;
}

GammaCheckReport liminf_check(const Grid& grid, const GridFunction& f, double amplitude,
                              const std::vector<double>& s_list, const ControlConfig& cfg,
                              const GammaTolerances& tolerances) {
    validate_ladder(s_list);
    cfg.validate();
    const double limit = extended_cost(PoissonSolver(assemble_classical(grid)), f, cfg);
    if (std::isinf(limit)) {
        throw ConfigError("liminf_check: f lies outside the admissible annulus");
    }
    const double center = 0.5 * (grid.x_left() + grid.x_right());
    const double radius = 0.5 * grid.length();

    GammaCheckReport report;
    for (std::size_t idx = 0; idx < s_list.size(); ++idx) {
        const std::size_t k = idx + 1;
        const double freq = static_cast<double>(k) * std::numbers::pi / radius;
        const GridFunction fk = f + amplitude * sample(grid, [=](double x) { return std::sin(freq * (x - center)); });
        const double value = extended_cost(PoissonSolver(assemble_fractional(grid, s_list[idx])), fk, cfg);
        if (std::isinf(value)) {
            throw ConfigError("liminf_check: perturbation k = " + std::to_string(k) +
                              " leaves the admissible annulus; reduce the amplitude");
        }
        report.liminf_rows.push_back({k, s_list[idx], value, limit, value - limit});
    }

    const std::size_t count = report.liminf_rows.size();
    const std::size_t tail = std::max<std::size_t>(1, (count + 2) / 3);
    double worst = kInf;
    for (std::size_t i = count - tail; i < count; ++i) {
        worst = std::min(worst, report.liminf_rows[i].margin);
    }
    report.liminf_passed = worst >= -tolerances.liminf_margin;
    return report;
}

}  // namespace fraclap
