#include "fraclap/specfun.hpp"

#include "fraclap/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fraclap {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
    771.32342877765313,    -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};

double lanczos(double x) {
    // valid for x ≥ 0.5
    const double z = x - 1.0;
    double series = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

}  // namespace

double gamma(double x) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw DomainError("gamma: argument must be positive and finite, got " + std::to_string(x));
    }
    if (x < 0.5) {
        return lanczos(x + 1.0) / x;
    }
    return lanczos(x);
}

FracConstant frac_constant(int dim, double s) {
    if (dim < 1) {
        throw DomainError("frac_constant: dimension must be >= 1");
    }
    if (!(s > 0.0 && s < 1.0)) {
        throw DomainError("frac_constant: order must lie in (0,1), got " + std::to_string(s));
    }
    const double half_dim = 0.5 * static_cast<double>(dim);
    const double value = s * std::pow(2.0, 2.0 * s) * gamma(half_dim + s) /
                         (std::pow(std::numbers::pi, half_dim) * gamma(1.0 - s));
    return {dim, s, value};
}

}  // namespace fraclap
