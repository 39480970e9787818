#pragma once

#include "fraclap/discretize.hpp"
#include "fraclap/grid.hpp"
#include "fraclap/linalg.hpp"

#include <cstddef>
#include <string_view>
#include <vector>

namespace fraclap {

/// State u solving A u = f, with its energy.
struct ForwardSolution {
    /// Order of the operator; 1 denotes the classical Laplacian.
    double s = 1.0;
    GridFunction f;
    GridFunction u;
    /// ⟨f, u⟩_h, the C-weighted seminorm squared of u.
    double seminorm_sq = 0.0;
    double l2_norm_u = 0.0;
};

/// Operator together with its Cholesky factor; applies the state map
/// S: f ↦ A⁻¹ f repeatedly without refactoring.
class PoissonSolver {
public:
    /// Throws FactorizationError if the operator is not positive definite.
    explicit PoissonSolver(Operator op);

    const Operator& op() const noexcept { return op_; }
    const Grid& grid() const noexcept { return op_.grid; }
    std::size_t size() const noexcept { return op_.size(); }

    GridFunction state(const GridFunction& f) const;
    ForwardSolution solve(const GridFunction& f) const;

private:
    Operator op_;
    CholeskyFactor factor_;
};

ForwardSolution solve_poisson(const Operator& op, const GridFunction& f);

enum class MaximumPrinciple { holds, violated, skipped };

/// For f ≥ 0 checks u = A⁻¹ f ≥ 0 entrywise; skipped when f has a negative entry.
MaximumPrinciple maximum_principle_check(const Operator& op, const GridFunction& f);

/// 1 / λ_min(A): the smallest C with ‖u‖²_h ≤ C ⟨A u, u⟩_h on the grid.
double poincare_constant(const Operator& op);

/// ⟨A_t v, v⟩_h for an operator of order t, used as a weaker fractional norm.
double cross_seminorm(const Operator& op_t, const GridFunction& v);

/// Coefficient of the exact solution of (−Δ)^s u = 1 on the unit interval
/// (−1, 1): u(x) = K_s (1 − x²)^s with K_s = 2^{−2s} Γ(1/2) / (Γ(1/2 + s) Γ(1 + s)).
double ball_solution_constant(double s);

/// Exact solution for f ≡ 1 on the grid's interval, centre c and radius r:
/// K_s (r² − (x − c)²)^s. s = 1 gives the classical ((r² − (x − c)²)/2).
GridFunction ball_solution(const Grid& grid, double s);

/// Named right-hand sides.
enum class RhsPreset { one, sine, hat };

/// Throws ConfigError for an unknown name.
RhsPreset parse_rhs_preset(std::string_view name);
std::string_view to_string(RhsPreset preset);

/// one: f ≡ 1; sine: first Dirichlet mode sin(π (x − x_left)/L); hat: tent of height 1.
GridFunction make_rhs(const Grid& grid, RhsPreset preset);

struct RefinementRow {
    std::size_t n = 0;
    double h = 0.0;
    double relative_l2_error = 0.0;
    double u_center = 0.0;
    double exact_center = 0.0;
};

/// Solves with f ≡ 1 on each grid size and measures the relative discrete L²
/// error against ball_solution.
std::vector<RefinementRow> ball_refinement_study(double x_left, double x_right, double s,
                                                 const std::vector<std::size_t>& sizes);

}  // namespace fraclap
