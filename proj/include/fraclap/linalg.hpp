#pragma once

#include "fraclap/dense_matrix.hpp"
#include "fraclap/discretize.hpp"
#include "fraclap/grid.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fraclap {

/// Lower-triangular Cholesky factor L with A = L Lᵀ.
class CholeskyFactor {
public:
    /// Throws FactorizationError naming the first non-positive pivot.
    explicit CholeskyFactor(const DenseMatrix& a);

    /// Returns std::nullopt instead of throwing when A is not positive definite.
    static std::optional<CholeskyFactor> try_factor(const DenseMatrix& a);

    std::size_t size() const noexcept { return lower_.size(); }

    void solve_in_place(std::span<double> b) const;
    std::vector<double> solve(std::span<const double> b) const;

private:
    struct Unchecked {};
    CholeskyFactor(Unchecked, DenseMatrix lower) : lower_(std::move(lower)) {}
    static std::optional<std::size_t> factor_in_place(DenseMatrix& a);

    DenseMatrix lower_;
};

/// Direct SPD solve. Throws FactorizationError or ShapeError.
std::vector<double> cholesky_solve(const DenseMatrix& a, std::span<const double> b);
GridFunction cholesky_solve(const Operator& op, const GridFunction& b);

struct CgResult {
    std::vector<double> x;
    bool converged = false;
    std::size_t iterations = 0;
    /// ‖A x − b‖ / ‖b‖ of the returned iterate.
    double relative_residual = 0.0;
};

/// Unpreconditioned conjugate gradients from x = 0. Never throws on
/// non-convergence; inspect CgResult::converged.
CgResult cg_solve(const DenseMatrix& a, std::span<const double> b, double tol, std::size_t max_iter);
CgResult cg_solve(const Operator& op, const GridFunction& b, double tol, std::size_t max_iter);

/// Eigenvalue with a vector normalized in the h-weighted inner product.
struct EigenPair {
    double value = 0.0;
    GridFunction vector;
};

struct EigenResult {
    EigenPair pair;
    bool converged = false;
    std::size_t iterations = 0;
    /// ‖A v − λ v‖₂ / (|λ| ‖v‖₂).
    double relative_residual = 0.0;
};

enum class Extreme { largest, smallest };

/// Extreme eigenpair of a symmetric positive definite matrix.
///
/// largest: power iteration with Rayleigh-quotient stopping. When the top of
/// the spectrum is clustered (slow power iteration) λ_max is bracketed by
/// Cholesky inertia tests on c I − A and the pair is finished by inverse
/// iteration with the shift c just above λ_max.
/// smallest: inverse iteration on the Cholesky factor of A.
///
/// Starts from the normalized all-ones vector and falls back to a seeded
/// pseudorandom start when the first run stagnates or lands on an interior
/// eigenvalue. `h` is the weight of the inner product used to normalize the
/// returned vector (h Σ v_i² = 1).
EigenResult eig_extreme(const DenseMatrix& a, double h, Extreme which, double tol,
                        std::size_t max_iter = 5000);
EigenResult eig_extreme(const Operator& op, Extreme which, double tol, std::size_t max_iter = 5000);

/// Upper limit on the size accepted by eig_full_jacobi.
inline constexpr std::size_t kJacobiMaxSize = 256;

/// Full spectrum by cyclic Jacobi rotations, eigenvalues ascending.
/// Intended as a test oracle; throws DomainError for n > kJacobiMaxSize.
std::vector<EigenPair> eig_full_jacobi(const DenseMatrix& a, double h);
std::vector<EigenPair> eig_full_jacobi(const Operator& op);

}  // namespace fraclap
