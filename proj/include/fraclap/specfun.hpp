#pragma once

namespace fraclap {

/// Gamma function for positive real arguments (Lanczos, g = 7, nine terms).
/// Relative error is at the 1e-15 level on [0.5, 30]; arguments in (0, 0.5)
/// are shifted up by one with Γ(x) = Γ(x + 1) / x.
/// Throws DomainError for x ≤ 0 or non-finite x.
double gamma(double x);

/// Normalizing constant of the integral fractional Laplacian in dimension N.
struct FracConstant {
    int dim = 1;
    double order = 0.5;
    double value = 0.0;
};

/// C_{N,s} = s 2^{2s} Γ((N+2s)/2) / (π^{N/2} Γ(1−s)).
/// Throws DomainError unless N ≥ 1 and 0 < s < 1.
FracConstant frac_constant(int dim, double s);

}  // namespace fraclap
