#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fraclap {

/// Argument outside the mathematical domain of an operation (s ∉ (0,1), h ≤ 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Vectors or operators whose sizes do not match.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative or direct solver could not produce a result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky met a non-positive pivot.
class FactorizationError : public NumericalError {
public:
    FactorizationError(std::size_t pivot, double value)
        : NumericalError("cholesky: non-positive pivot " + std::to_string(value) +
                         " at index " + std::to_string(pivot)),
          pivot_(pivot) {}

    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// Invalid solver or run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace fraclap
