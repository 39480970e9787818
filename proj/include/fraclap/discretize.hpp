#pragma once

#include "fraclap/dense_matrix.hpp"
#include "fraclap/grid.hpp"

#include <cstddef>
#include <vector>

namespace fraclap {

/// Quadrature weights of the 1-D fractional Laplacian on a uniform grid.
///
/// The operator is written in symmetrized principal-value form
///     (−Δ)^s u(x) = C_{1,s} ∫₀^∞ (2u(x) − u(x+r) − u(x−r)) r^{−1−2s} dr
/// and split into cells around the nodes r = k h:
///   - r ∈ (0, h): second difference times ∫ r^{1−2s}, the singular cell;
///   - r ∈ (h, 3h/2) and ((k−½)h, (k+½)h), k ≥ 2: nearest-node values with
///     the kernel integrated exactly;
///   - r > (K+½)h: closed-form remainder of the telescoping sum.
/// Every weight is positive, so the assembled matrix is an M-matrix.
struct StencilWeights {
    double s = 0.5;
    double h = 1.0;
    /// w[k - 1] is the weight of distance k h, for k = 1..K.
    std::vector<double> w;
    /// Σ_{k>K} w_k.
    double tail = 0.0;

    std::size_t count() const noexcept { return w.size(); }
    double at(std::size_t k) const { return w.at(k - 1); }
};

/// Throws DomainError unless s ∈ (0,1), h > 0 and K ≥ 2.
StencilWeights stencil_weights(double s, double h, std::size_t K);

enum class OperatorKind { fractional, classical };

/// Dense symmetric matrix of a discrete (fractional or classical) Laplacian
/// acting on interior nodal values, exterior values fixed to zero.
struct Operator {
    OperatorKind kind = OperatorKind::classical;
    /// s for fractional operators, 1 for the classical one.
    double order = 1.0;
    DenseMatrix matrix;
    Grid grid;

    std::size_t size() const noexcept { return matrix.size(); }
    GridFunction apply(const GridFunction& v) const;
};

/// Symmetric Toeplitz collocation matrix of (−Δ)^s with zero exterior data:
/// A_ii = 2 (Σ_k w_k + tail), A_ij = −w_{|i−j|}.
Operator assemble_fractional(const Grid& grid, double s);

/// Three-point (−1, 2, −1)/h² Laplacian.
Operator assemble_classical(const Grid& grid);

/// ⟨A v, v⟩_h. Throws ShapeError on size mismatch.
double quadratic_form(const Operator& op, const GridFunction& v);

}  // namespace fraclap
