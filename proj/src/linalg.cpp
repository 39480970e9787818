#include "fraclap/linalg.hpp"

#include "fraclap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fraclap {

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw ShapeError("matrix multiply: size mismatch");
    }
    for (std::size_t i = 0; i < n_; ++i) {
        const double* r = data_.data() + i * n_;
        double sum = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            sum += r[j] * x[j];
        }
        y[i] = sum;
    }
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(n_);
    multiply(x, y);
    return y;
}

bool DenseMatrix::is_symmetric() const noexcept {
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            if ((*this)(i, j) != (*this)(j, i)) {
                return false;
            }
        }
    }
    return true;
}

double DenseMatrix::trace() const noexcept {
    double t = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double DenseMatrix::frobenius_norm() const noexcept {
    double sum = 0.0;
    for (double v : data_) {
        sum += v * v;
    }
    return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Cholesky

std::optional<std::size_t> CholeskyFactor::factor_in_place(DenseMatrix& a) {
    const std::size_t n = a.size();
    for (std::size_t j = 0; j < n; ++j) {
        double* rj = &a(j, 0);
        double pivot = rj[j];
        for (std::size_t k = 0; k < j; ++k) {
            pivot -= rj[k] * rj[k];
        }
        if (!(pivot > 0.0) || !std::isfinite(pivot)) {
            rj[j] = pivot;
            return j;
        }
        const double ljj = std::sqrt(pivot);
        rj[j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double* ri = &a(i, 0);
            double sum = ri[j];
            for (std::size_t k = 0; k < j; ++k) {
                sum -= ri[k] * rj[k];
            }
            ri[j] = sum / ljj;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            a(i, j) = 0.0;
        }
    }
    return std::nullopt;
}

CholeskyFactor::CholeskyFactor(const DenseMatrix& a) : lower_(a) {
    if (const auto failed = factor_in_place(lower_)) {
        throw FactorizationError(*failed, lower_(*failed, *failed));
    }
}

std::optional<CholeskyFactor> CholeskyFactor::try_factor(const DenseMatrix& a) {
    DenseMatrix lower = a;
    if (factor_in_place(lower)) {
        return std::nullopt;
    }
    return CholeskyFactor(Unchecked{}, std::move(lower));
}

void CholeskyFactor::solve_in_place(std::span<double> b) const {
    const std::size_t n = size();
    if (b.size() != n) {
        throw ShapeError("cholesky solve: size mismatch");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = lower_.row(i);
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            sum -= r[k] * b[k];
        }
        b[i] = sum / r[i];
    }
    for (std::size_t i = n; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            sum -= lower_(k, i) * b[k];
        }
        b[i] = sum / lower_(i, i);
    }
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
    std::vector<double> x(b.begin(), b.end());
    solve_in_place(x);
    return x;
}

std::vector<double> cholesky_solve(const DenseMatrix& a, std::span<const double> b) {
    if (b.size() != a.size()) {
        throw ShapeError("cholesky_solve: size mismatch");
    }
    return CholeskyFactor(a).solve(b);
}

GridFunction cholesky_solve(const Operator& op, const GridFunction& b) {
    return GridFunction(cholesky_solve(op.matrix, b.span()));
}

// ---------------------------------------------------------------------------
// Conjugate gradients

CgResult cg_solve(const DenseMatrix& a, std::span<const double> b, double tol, std::size_t max_iter) {
    const std::size_t n = a.size();
    if (b.size() != n) {
        throw ShapeError("cg_solve: size mismatch");
    }
    if (!(tol > 0.0)) {
        throw DomainError("cg_solve: tolerance must be positive");
    }

    CgResult result;
    result.x.assign(n, 0.0);
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm == 0.0) {
        result.converged = true;
        return result;
    }

    std::vector<double> r(b.begin(), b.end());
    std::vector<double> p = r;
    std::vector<double> ap(n);
    double rr = dot(r, r);

    for (std::size_t it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= tol * b_norm) {
            break;
        }
        a.multiply(p, ap);
        const double alpha = rr / dot(p, ap);
        for (std::size_t i = 0; i < n; ++i) {
            result.x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_next = dot(r, r);
        const double beta = rr_next / rr;
        rr = rr_next;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = r[i] + beta * p[i];
        }
        result.iterations = it + 1;
    }

    // true residual, not the recursively updated one
    std::vector<double> ax = a.multiply(result.x);
    double res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        res += (ax[i] - b[i]) * (ax[i] - b[i]);
    }
    result.relative_residual = std::sqrt(res) / b_norm;
    result.converged = result.relative_residual <= tol;
    return result;
}

CgResult cg_solve(const Operator& op, const GridFunction& b, double tol, std::size_t max_iter) {
    return cg_solve(op.matrix, b.span(), tol, max_iter);
}

// ---------------------------------------------------------------------------
// Extreme eigenpairs

namespace {

constexpr std::size_t kPowerSteps = 200;
constexpr std::size_t kStartAttempts = 3;
constexpr double kBracketWidth = 1e-10;

void normalize(std::vector<double>& v) {
    const double norm = std::sqrt(dot(v, v));
    for (double& x : v) {
        x /= norm;
    }
}

std::vector<double> start_vector(std::size_t n, std::size_t attempt) {
    std::vector<double> v(n, 1.0);
    if (attempt > 0) {
        std::mt19937_64 rng(0x5eedULL + attempt);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        for (double& x : v) {
            x = dist(rng);
        }
    }
    normalize(v);
    return v;
}

struct RayleighState {
    double value = 0.0;
    double residual = 0.0;  // absolute ‖Av − λv‖ for unit v
};

RayleighState rayleigh(const DenseMatrix& a, const std::vector<double>& v, std::vector<double>& av) {
    a.multiply(v, av);
    const double lambda = dot(v, av);
    double res = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double d = av[i] - lambda * v[i];
        res += d * d;
    }
    return {lambda, std::sqrt(res)};
}

DenseMatrix shifted(const DenseMatrix& a, double shift, double sign) {
    // shift·I + sign·A
    DenseMatrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            m(i, j) = sign * a(i, j);
        }
        m(i, i) += shift;
    }
    return m;
}

double gershgorin_upper(const DenseMatrix& a) {
    double bound = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double row = a(i, i);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (j != i) {
                row += std::abs(a(i, j));
            }
        }
        bound = std::max(bound, row);
    }
    return bound;
}

double max_diagonal(const DenseMatrix& a) {
    double m = a(0, 0);
    for (std::size_t i = 1; i < a.size(); ++i) {
        m = std::max(m, a(i, i));
    }
    return m;
}

struct Attempt {
    std::vector<double> v;
    RayleighState state;
    std::size_t iterations = 0;
    bool converged = false;
};

bool small_enough(const RayleighState& st, double tol) {
    return st.residual <= tol * std::abs(st.value);
}

// c I − A must be positive definite for c = λ + margin when λ is the top eigenvalue.
bool confirms_largest(const DenseMatrix& a, const RayleighState& st) {
    const double margin = std::max(2.0 * st.residual, 1e-10 * std::abs(st.value));
    return CholeskyFactor::try_factor(shifted(a, st.value + margin, -1.0)).has_value();
}

bool confirms_smallest(const DenseMatrix& a, const RayleighState& st) {
    const double margin = std::max(2.0 * st.residual, 1e-10 * std::abs(st.value));
    return CholeskyFactor::try_factor(shifted(a, -(st.value - margin), 1.0)).has_value();
}

Attempt inverse_iteration(const DenseMatrix& a, const CholeskyFactor& factor, std::vector<double> v,
                          double tol, std::size_t max_iter) {
    Attempt out;
    std::vector<double> av(v.size());
    for (std::size_t it = 0; it < max_iter; ++it) {
        factor.solve_in_place(v);
        normalize(v);
        out.state = rayleigh(a, v, av);
        out.iterations = it + 1;
        if (small_enough(out.state, tol)) {
            out.converged = true;
            break;
        }
    }
    out.v = std::move(v);
    return out;
}

Attempt largest_from(const DenseMatrix& a, std::vector<double> v, double tol, std::size_t max_iter) {
    Attempt out;
    std::vector<double> av(v.size());
    out.state = rayleigh(a, v, av);

    const std::size_t power_steps = std::min(max_iter, kPowerSteps);
    for (std::size_t it = 0; it < power_steps && !small_enough(out.state, tol); ++it) {
        v = av;
        normalize(v);
        out.state = rayleigh(a, v, av);
        out.iterations = it + 1;
    }
    if (small_enough(out.state, tol)) {
        out.v = std::move(v);
        out.converged = confirms_largest(a, out.state);
        return out;
    }

    // Clustered top of the spectrum: bracket λ_max with inertia tests.
    double lo = std::max(out.state.value, max_diagonal(a));
    double hi = gershgorin_upper(a);
    hi += 1e-12 * std::abs(hi) + 1e-300;
    auto factor = CholeskyFactor::try_factor(shifted(a, hi, -1.0));
    while (!factor) {
        hi *= 2.0;
        factor = CholeskyFactor::try_factor(shifted(a, hi, -1.0));
    }
    while (hi - lo > kBracketWidth * std::abs(hi)) {
        const double mid = 0.5 * (lo + hi);
        auto trial = CholeskyFactor::try_factor(shifted(a, mid, -1.0));
        if (trial) {
            hi = mid;
            factor = std::move(trial);
        } else {
            lo = mid;
        }
    }

    const std::size_t remaining = max_iter > out.iterations ? max_iter - out.iterations : 1;
    Attempt refined = inverse_iteration(a, *factor, std::move(v), tol, remaining);
    refined.iterations += out.iterations;
    // a vector orthogonal to the top eigenspace converges to an interior eigenvalue
    if (refined.state.value < lo - 1e-8 * std::abs(hi)) {
        refined.converged = false;
    }
    return refined;
}

Attempt smallest_from(const DenseMatrix& a, const CholeskyFactor& factor, std::vector<double> v, double tol,
                      std::size_t max_iter) {
    Attempt out = inverse_iteration(a, factor, std::move(v), tol, max_iter);
    if (out.converged) {
        out.converged = confirms_smallest(a, out.state);
    }
    return out;
}

}  // namespace

EigenResult eig_extreme(const DenseMatrix& a, double h, Extreme which, double tol, std::size_t max_iter) {
    const std::size_t n = a.size();
    if (n == 0) {
        throw ShapeError("eig_extreme: empty matrix");
    }
    if (!(tol > 0.0) || !(h > 0.0)) {
        throw DomainError("eig_extreme: tolerance and weight must be positive");
    }

    std::optional<CholeskyFactor> factor;
    if (which == Extreme::smallest) {
        factor.emplace(a);
    }

    Attempt best;
    for (std::size_t attempt = 0; attempt < kStartAttempts; ++attempt) {
        std::vector<double> v0 = start_vector(n, attempt);
        Attempt run = which == Extreme::largest ? largest_from(a, std::move(v0), tol, max_iter)
                                                : smallest_from(a, *factor, std::move(v0), tol, max_iter);
        run.iterations += best.iterations;
        best = std::move(run);
        if (best.converged) {
            break;
        }
    }

    EigenResult result;
    result.converged = best.converged;
    result.iterations = best.iterations;
    result.relative_residual = best.state.residual / std::abs(best.state.value);
    result.pair.value = best.state.value;
    const double scale = 1.0 / std::sqrt(h);
    result.pair.vector = GridFunction(std::move(best.v));
    result.pair.vector *= scale;
    return result;
}

EigenResult eig_extreme(const Operator& op, Extreme which, double tol, std::size_t max_iter) {
    return eig_extreme(op.matrix, op.grid.h(), which, tol, max_iter);
}

// ---------------------------------------------------------------------------
// Jacobi

std::vector<EigenPair> eig_full_jacobi(const DenseMatrix& input, double h) {
    const std::size_t n = input.size();
    if (n > kJacobiMaxSize) {
        throw DomainError("eig_full_jacobi: size " + std::to_string(n) + " exceeds cap " +
                          std::to_string(kJacobiMaxSize));
    }
    if (!(h > 0.0)) {
        throw DomainError("eig_full_jacobi: weight must be positive");
    }
    DenseMatrix a = input;
    DenseMatrix v = DenseMatrix::identity(n);

    const double scale = input.frobenius_norm();
    const auto off_diagonal = [&a, n] {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                sum += a(i, j) * a(i, j);
            }
        }
        return std::sqrt(sum);
    };

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal() <= 1e-15 * scale) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) {
                        continue;
                    }
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = a(p, k) = c * akp - s * akq;
                    a(k, q) = a(q, k) = s * akp + c * akq;
                }
                a(p, p) -= t * apq;
                a(q, q) += t * apq;
                a(p, q) = a(q, p) = 0.0;

                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    const double unit = 1.0 / std::sqrt(h);
    std::vector<EigenPair> pairs;
    pairs.reserve(n);
    for (std::size_t idx : order) {
        GridFunction vec(n);
        for (std::size_t k = 0; k < n; ++k) {
            vec[k] = v(k, idx) * unit;
        }
        pairs.push_back({a(idx, idx), std::move(vec)});
    }
    return pairs;
}

std::vector<EigenPair> eig_full_jacobi(const Operator& op) {
    return eig_full_jacobi(op.matrix, op.grid.h());
}

}  // namespace fraclap
