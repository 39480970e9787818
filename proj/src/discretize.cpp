#include "fraclap/discretize.hpp"

#include "fraclap/errors.hpp"
#include "fraclap/specfun.hpp"

#include <cmath>
#include <string>

namespace fraclap {

Grid::Grid(double x_left, double x_right, std::size_t n)
    : x_left_(x_left), x_right_(x_right), n_(n), h_((x_right - x_left) / static_cast<double>(n + 1)) {
    if (!std::isfinite(x_left) || !std::isfinite(x_right) || !(x_left < x_right)) {
        throw DomainError("grid: need finite x_left < x_right");
    }
    if (n < 3) {
        throw DomainError("grid: need at least 3 interior nodes, got " + std::to_string(n));
    }
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
    if (other.size() != size()) {
        throw ShapeError("grid function: size mismatch in +=");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        values_[i] += other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
    if (other.size() != size()) {
        throw ShapeError("grid function: size mismatch in -=");
    }
    for (std::size_t i = 0; i < size(); ++i) {
        values_[i] -= other.values_[i];
    }
    return *this;
}

GridFunction& GridFunction::operator*=(double factor) noexcept {
    for (double& v : values_) {
        v *= factor;
    }
    return *this;
}

GridFunction sample(const Grid& grid, const std::function<double(double)>& fn) {
    GridFunction out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out[i] = fn(grid.node(i));
    }
    return out;
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw ShapeError("dot: size mismatch");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += x[i] * y[i];
    }
    return sum;
}

double inner_product_h(const GridFunction& v, const GridFunction& w, const Grid& grid) {
    if (v.size() != w.size() || v.size() != grid.size()) {
        throw ShapeError("inner_product_h: expected " + std::to_string(grid.size()) +
                         " values, got " + std::to_string(v.size()) + " and " +
                         std::to_string(w.size()));
    }
    return grid.h() * dot(v.span(), w.span());
}

double norm_h(const GridFunction& v, const Grid& grid) {
    return std::sqrt(inner_product_h(v, v, grid));
}

StencilWeights stencil_weights(double s, double h, std::size_t K) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw DomainError("stencil_weights: spacing must be positive");
    }
    if (K < 2) {
        throw DomainError("stencil_weights: need K >= 2");
    }
    const double c = frac_constant(1, s).value;
    const double scale = c / (2.0 * s) * std::pow(h, -2.0 * s);
    const auto cell_edge = [s](double r) { return std::pow(r, -2.0 * s); };

    StencilWeights out;
    out.s = s;
    out.h = h;
    out.w.resize(K);
    out.w[0] = c * std::pow(h, -2.0 * s) / (2.0 - 2.0 * s) + scale * (1.0 - cell_edge(1.5));
    for (std::size_t k = 2; k <= K; ++k) {
        const double kd = static_cast<double>(k);
        out.w[k - 1] = scale * (cell_edge(kd - 0.5) - cell_edge(kd + 0.5));
    }
    out.tail = scale * cell_edge(static_cast<double>(K) + 0.5);
    return out;
}

GridFunction Operator::apply(const GridFunction& v) const {
    if (v.size() != size()) {
        throw ShapeError("operator apply: size mismatch");
    }
    GridFunction out(size());
    matrix.multiply(v.span(), out.span());
    return out;
}

Operator assemble_fractional(const Grid& grid, double s) {
    const std::size_t n = grid.size();
    const StencilWeights weights = stencil_weights(s, grid.h(), n);

    double total = weights.tail;
    for (double w : weights.w) {
        total += w;
    }
    const double diagonal = 2.0 * total;

    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t dist = i > j ? i - j : j - i;
            m(i, j) = dist == 0 ? diagonal : -weights.w[dist - 1];
        }
    }
    return {OperatorKind::fractional, s, std::move(m), grid};
}

Operator assemble_classical(const Grid& grid) {
    const std::size_t n = grid.size();
    const double inv_h2 = 1.0 / (grid.h() * grid.h());
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 2.0 * inv_h2;
        if (i + 1 < n) {
            m(i, i + 1) = -inv_h2;
            m(i + 1, i) = -inv_h2;
        }
    }
    return {OperatorKind::classical, 1.0, std::move(m), grid};
}

double quadratic_form(const Operator& op, const GridFunction& v) {
    if (v.size() != op.size()) {
        throw ShapeError("quadratic_form: size mismatch");
    }
    return inner_product_h(op.apply(v), v, op.grid);
}

}  // namespace fraclap
