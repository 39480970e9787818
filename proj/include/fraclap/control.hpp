#pragma once

#include "fraclap/discretize.hpp"
#include "fraclap/forward.hpp"
#include "fraclap/grid.hpp"

#include <cstddef>
#include <optional>
#include <string_view>

namespace fraclap {

enum class StepRule { fixed_lipschitz, armijo };

/// Throws ConfigError for an unknown name ("fixed" or "armijo").
StepRule parse_step_rule(std::string_view name);
std::string_view to_string(StepRule rule);

/// Reduced problem min ½⟨S f, f⟩_h + (μ/2)‖f‖²_h over a ≤ ‖f‖_h ≤ b.
struct ControlConfig {
    double mu = 0.1;
    double a = 1.0;
    double b = 2.0;
    /// Stopping tolerance on the projected-gradient residual.
    double tol = 1e-10;
    std::size_t max_iter = 20000;
    StepRule step_rule = StepRule::fixed_lipschitz;
    /// Relative residual demanded of the eigensolver in eigen_solve_control.
    double eig_tol = 1e-13;

    /// Throws ConfigError unless μ > 0, 0 ≤ a ≤ b, tol > 0 and max_iter > 0.
    void validate() const;
};

enum class ActiveBound { none, lower, upper };
std::string_view to_string(ActiveBound bound);

struct OptimResult {
    GridFunction f_star;
    GridFunction u_star;
    double J_star = 0.0;
    /// Norm of the projected-gradient residual at f_star.
    double grad_norm = 0.0;
    std::size_t iters = 0;
    bool converged = false;
    ActiveBound active_bound = ActiveBound::none;
    /// The starting point was f = 0 with a > 0 and got the canonical direction.
    bool degenerate_start = false;
    /// λ_max(A) for eigen_solve_control, 0 otherwise.
    double lambda_max = 0.0;
};

/// ½⟨u_f, f⟩_h + (μ/2)⟨f, f⟩_h with A u_f = f.
double reduced_cost(const PoissonSolver& solver, const GridFunction& f, double mu);
double reduced_cost(const Operator& op, const GridFunction& f, double mu);

/// u_f + μ f, the gradient of reduced_cost in the h inner product.
GridFunction reduced_gradient(const PoissonSolver& solver, const GridFunction& f, double mu);
GridFunction reduced_gradient(const Operator& op, const GridFunction& f, double mu);

struct AnnulusProjection {
    GridFunction f;
    /// f was zero and a > 0: the normalized constant vector of norm a was returned.
    bool degenerate = false;
};

/// Radial projection onto {a ≤ ‖f‖_h ≤ b}. Throws ConfigError if a > b or a < 0.
AnnulusProjection project_annulus(const GridFunction& f, const Grid& grid, double a, double b);

/// Flips f so that its largest-magnitude entry is positive. Entries within a
/// relative 1e-8 of the maximum count as ties and the first of them decides.
GridFunction canonical_sign(GridFunction f);

/// Projected gradient descent from f0 (default: projection of the all-ones
/// vector). Fixed steps use 1 / (1/λ_min(A) + μ), the inverse Lipschitz
/// constant of the gradient. Non-convergence is reported, not thrown.
OptimResult pgd_solve(const PoissonSolver& solver, const ControlConfig& cfg,
                      const std::optional<GridFunction>& f0 = std::nullopt);
OptimResult pgd_solve(const Operator& op, const ControlConfig& cfg,
                      const std::optional<GridFunction>& f0 = std::nullopt);

/// Global minimizer from the spectrum. For a > 0 the cost grows along rays,
/// so the lower bound is active and f* = a v with v the unit eigenvector of
/// λ_max(A); J* = a² / (2 λ_max) + μ a² / 2. For a = 0, f* = 0.
/// Throws NumericalError if the eigensolver fails.
OptimResult eigen_solve_control(const PoissonSolver& solver, const ControlConfig& cfg);
OptimResult eigen_solve_control(const Operator& op, const ControlConfig& cfg);

/// Cost comparison of a candidate (typically pgd_solve) with the global optimum.
struct OptimalityCheck {
    /// (J_candidate − J_global) / (1 + J_global), signed.
    double relative_gap = 0.0;
    /// |relative_gap| ≤ tolerance.
    bool agrees = false;
    /// Candidate stopped above the global cost: a non-extreme stationary
    /// point or an unfinished run.
    bool flagged_suboptimal = false;
    /// Candidate beat the "global" optimum by more than rounding.
    bool below_global = false;
};

OptimalityCheck compare_with_global(const OptimResult& candidate, const OptimResult& global,
                                    double tolerance = 1e-8);

}  // namespace fraclap
