#include "fraclap/control.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fraclap {

StepRule parse_step_rule(std::string_view name) {
    if (name == "fixed") {
        return StepRule::fixed_lipschitz;
    }
    if (name == "armijo") {
        return StepRule::armijo;
    }
    throw ConfigError("unknown step rule '" + std::string(name) + "' (expected fixed or armijo)");
}

std::string_view to_string(StepRule rule) {
    return rule == StepRule::armijo ? "armijo" : "fixed";
}

std::string_view to_string(ActiveBound bound) {
    switch (bound) {
        case ActiveBound::lower:
            return "lower";
        case ActiveBound::upper:
            return "upper";
        case ActiveBound::none:
            break;
    }
    return "none";
}

void ControlConfig::validate() const {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ConfigError("mu must be positive");
    }
    if (!(a >= 0.0) || !std::isfinite(b)) {
        throw ConfigError("a must be nonnegative and b finite");
    }
    if (a > b) {
        throw ConfigError("a > b");
    }
    if (!(tol > 0.0) || !(eig_tol > 0.0)) {
        throw ConfigError("tolerances must be positive");
    }
    if (max_iter == 0) {
        throw ConfigError("max_iter must be positive");
    }
}

double reduced_cost(const PoissonSolver& solver, const GridFunction& f, double mu) {
    const GridFunction u = solver.state(f);
    const Grid& grid = solver.grid();
    return 0.5 * inner_product_h(u, f, grid) + 0.5 * mu * inner_product_h(f, f, grid);
}

double reduced_cost(const Operator& op, const GridFunction& f, double mu) {
    return reduced_cost(PoissonSolver(op), f, mu);
}

GridFunction reduced_gradient(const PoissonSolver& solver, const GridFunction& f, double mu) {
    GridFunction g = solver.state(f);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] += mu * f[i];
    }
    return g;
}

GridFunction reduced_gradient(const Operator& op, const GridFunction& f, double mu) {
    return reduced_gradient(PoissonSolver(op), f, mu);
}

AnnulusProjection project_annulus(const GridFunction& f, const Grid& grid, double a, double b) {
    if (!(a >= 0.0)) {
        throw ConfigError("project_annulus: a must be nonnegative");
    }
    if (a > b) {
        throw ConfigError("project_annulus: a > b");
    }
    const double norm = norm_h(f, grid);
    if (norm == 0.0) {
        if (a == 0.0) {
            return {f, false};
        }
        GridFunction ones(f.size(), 1.0);
        ones *= a / norm_h(ones, grid);
        return {std::move(ones), true};
    }
    const double target = std::clamp(norm, a, b);
    if (target == norm) {
        return {f, false};
    }
    return {f * (target / norm), false};
}

GridFunction canonical_sign(GridFunction f) {
    double largest = 0.0;
    for (double v : f) {
        largest = std::max(largest, std::abs(v));
    }
    if (largest == 0.0) {
        return f;
    }
    for (double v : f) {
        if (std::abs(v) >= largest * (1.0 - 1e-8)) {
            if (v < 0.0) {
                f *= -1.0;
            }
            break;
        }
    }
    return f;
}

namespace {

ActiveBound classify(double norm, const ControlConfig& cfg) {
    const double slack = 1e-9 * std::max(1.0, cfg.b);
    if (cfg.a > 0.0 && std::abs(norm - cfg.a) <= slack) {
        return ActiveBound::lower;
    }
    if (std::abs(norm - cfg.b) <= slack) {
        return ActiveBound::upper;
    }
    return ActiveBound::none;
}

double lipschitz_step(const PoissonSolver& solver, double mu) {
    return 1.0 / (poincare_constant(solver.op()) + mu);
}

/// ‖f − P(f − t g)‖_h / t.
double gradient_mapping_norm(const GridFunction& f, const GridFunction& g, double step, const Grid& grid,
                             const ControlConfig& cfg) {
    const GridFunction trial = project_annulus(f - step * g, grid, cfg.a, cfg.b).f;
    return norm_h(f - trial, grid) / step;
}

void finish(OptimResult& out, const PoissonSolver& solver, const ControlConfig& cfg, double step) {
    const Grid& grid = solver.grid();
    out.f_star = canonical_sign(std::move(out.f_star));
    out.u_star = solver.state(out.f_star);
    out.J_star = reduced_cost(solver, out.f_star, cfg.mu);
    out.grad_norm =
        gradient_mapping_norm(out.f_star, reduced_gradient(solver, out.f_star, cfg.mu), step, grid, cfg);
    out.active_bound = classify(norm_h(out.f_star, grid), cfg);
}

}  // namespace

OptimResult pgd_solve(const PoissonSolver& solver, const ControlConfig& cfg, const std::optional<GridFunction>& f0) {
    cfg.validate();
    const Grid& grid = solver.grid();
    const double mu = cfg.mu;
    const double step_lip = lipschitz_step(solver, mu);

    OptimResult out;
    AnnulusProjection start = project_annulus(f0 ? *f0 : GridFunction(solver.size(), 1.0), grid, cfg.a, cfg.b);
    out.degenerate_start = start.degenerate;
    GridFunction f = std::move(start.f);
    double cost = reduced_cost(solver, f, mu);

    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        const GridFunction g = reduced_gradient(solver, f, mu);
        double step = step_lip;
        GridFunction next = project_annulus(f - step * g, grid, cfg.a, cfg.b).f;
        double next_cost = reduced_cost(solver, next, mu);

        if (cfg.step_rule == StepRule::armijo) {
            constexpr double kSufficient = 1e-4;
            constexpr int kMaxHalvings = 40;
            step = 4.0 * step_lip;
            for (int k = 0; k < kMaxHalvings; ++k) {
                next = project_annulus(f - step * g, grid, cfg.a, cfg.b).f;
                next_cost = reduced_cost(solver, next, mu);
                const GridFunction d = next - f;
                if (next_cost <= cost - kSufficient / step * inner_product_h(d, d, grid)) {
                    break;
                }
                step *= 0.5;
            }
        }

        const double residual = norm_h(f - next, grid) / step;
        out.iters = it + 1;
        f = std::move(next);
        cost = next_cost;
        if (residual <= cfg.tol) {
            out.converged = true;
            break;
        }
    }

    out.f_star = std::move(f);
    finish(out, solver, cfg, step_lip);
    return out;
}

OptimResult pgd_solve(const Operator& op, const ControlConfig& cfg, const std::optional<GridFunction>& f0) {
    return pgd_solve(PoissonSolver(op), cfg, f0);
}

OptimResult eigen_solve_control(const PoissonSolver& solver, const ControlConfig& cfg) {
    cfg.validate();
    OptimResult out;
    if (cfg.a == 0.0) {
        out.f_star = GridFunction(solver.size(), 0.0);
        out.u_star = GridFunction(solver.size(), 0.0);
        out.converged = true;
        return out;
    }

    const EigenResult eig = eig_extreme(solver.op(), Extreme::largest, cfg.eig_tol);
    if (!eig.converged) {
        throw NumericalError("eigen_solve_control: largest eigenpair did not converge (residual " +
                             std::to_string(eig.relative_residual) + ")");
    }
    out.lambda_max = eig.pair.value;
    out.iters = eig.iterations;
    out.converged = true;
    out.f_star = eig.pair.vector * cfg.a;
    finish(out, solver, cfg, lipschitz_step(solver, cfg.mu));
    return out;
}

OptimResult eigen_solve_control(const Operator& op, const ControlConfig& cfg) {
    return eigen_solve_control(PoissonSolver(op), cfg);
}

OptimalityCheck compare_with_global(const OptimResult& candidate, const OptimResult& global, double tolerance) {
    OptimalityCheck check;
    check.relative_gap = (candidate.J_star - global.J_star) / (1.0 + global.J_star);
    check.agrees = std::abs(check.relative_gap) <= tolerance;
    check.flagged_suboptimal = !check.agrees && check.relative_gap > 0.0;
    check.below_global = check.relative_gap < -tolerance;
    return check;
}

}  // namespace fraclap
