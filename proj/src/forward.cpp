#include "fraclap/forward.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace fraclap {

PoissonSolver::PoissonSolver(Operator op) : op_(std::move(op)), factor_(op_.matrix) {}

GridFunction PoissonSolver::state(const GridFunction& f) const {
    if (f.size() != size()) {
        throw ShapeError("poisson solve: right-hand side has " + std::to_string(f.size()) +
                         " values, operator has " + std::to_string(size()));
    }
    return GridFunction(factor_.solve(f.span()));
}

ForwardSolution PoissonSolver::solve(const GridFunction& f) const {
    ForwardSolution out;
    out.s = op_.order;
    out.f = f;
    out.u = state(f);
    out.seminorm_sq = inner_product_h(out.f, out.u, grid());
    out.l2_norm_u = norm_h(out.u, grid());
    return out;
}

ForwardSolution solve_poisson(const Operator& op, const GridFunction& f) {
    return PoissonSolver(op).solve(f);
}

MaximumPrinciple maximum_principle_check(const Operator& op, const GridFunction& f) {
    if (std::any_of(f.begin(), f.end(), [](double v) { return v < 0.0; })) {
        return MaximumPrinciple::skipped;
    }
    const GridFunction u = cholesky_solve(op, f);
    return std::all_of(u.begin(), u.end(), [](double v) { return v >= 0.0; }) ? MaximumPrinciple::holds
                                                                              : MaximumPrinciple::violated;
}

double poincare_constant(const Operator& op) {
    const EigenResult eig = eig_extreme(op, Extreme::smallest, 1e-9);
    if (!eig.converged) {
        throw NumericalError("poincare_constant: smallest eigenvalue did not converge");
    }
    return 1.0 / eig.pair.value;
}

double cross_seminorm(const Operator& op_t, const GridFunction& v) {
    return quadratic_form(op_t, v);
}

double ball_solution_constant(double s) {
    if (!(s > 0.0 && s <= 1.0)) {
        throw DomainError("ball_solution_constant: order must lie in (0,1]");
    }
    return std::pow(2.0, -2.0 * s) * std::sqrt(std::numbers::pi) / (gamma(0.5 + s) * gamma(1.0 + s));
}

GridFunction ball_solution(const Grid& grid, double s) {
    const double k = ball_solution_constant(s);
    const double center = 0.5 * (grid.x_left() + grid.x_right());
    const double radius = 0.5 * grid.length();
    return sample(grid, [=](double x) {
        const double d = x - center;
        return k * std::pow(std::max(radius * radius - d * d, 0.0), s);
    });
}

RhsPreset parse_rhs_preset(std::string_view name) {
    if (name == "one") {
        return RhsPreset::one;
    }
    if (name == "sine") {
        return RhsPreset::sine;
    }
    if (name == "hat") {
        return RhsPreset::hat;
    }
    throw ConfigError("unknown rhs preset '" + std::string(name) + "' (expected one, sine or hat)");
}

std::string_view to_string(RhsPreset preset) {
    switch (preset) {
        case RhsPreset::one:
            return "one";
        case RhsPreset::sine:
            return "sine";
        case RhsPreset::hat:
            return "hat";
    }
    return "one";
}

GridFunction make_rhs(const Grid& grid, RhsPreset preset) {
    const double left = grid.x_left();
    const double length = grid.length();
    switch (preset) {
        case RhsPreset::one:
            return GridFunction(grid.size(), 1.0);
        case RhsPreset::sine:
            return sample(grid, [=](double x) { return std::sin(std::numbers::pi * (x - left) / length); });
        case RhsPreset::hat:
            return sample(grid, [=](double x) { return 1.0 - std::abs(2.0 * (x - left) / length - 1.0); });
    }
    return GridFunction(grid.size(), 1.0);
}

std::vector<RefinementRow> ball_refinement_study(double x_left, double x_right, double s,
                                                 const std::vector<std::size_t>& sizes) {
    std::vector<RefinementRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t n : sizes) {
        const Grid grid(x_left, x_right, n);
        const Operator op = assemble_fractional(grid, s);
        const GridFunction u = cholesky_solve(op, GridFunction(n, 1.0));
        const GridFunction exact = ball_solution(grid, s);

        RefinementRow row;
        row.n = n;
        row.h = grid.h();
        row.relative_l2_error = norm_h(u - exact, grid) / norm_h(exact, grid);
        // centre node for odd n, average of the two central nodes for even n
        if (n % 2 == 1) {
            row.u_center = u[n / 2];
        } else {
            row.u_center = 0.5 * (u[n / 2 - 1] + u[n / 2]);
        }
        const double radius = 0.5 * grid.length();
        row.exact_center = ball_solution_constant(s) * std::pow(radius * radius, s);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace fraclap
