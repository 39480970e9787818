#pragma once

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <vector>

namespace fraclap {

/// Uniform mesh of the open interval (x_left, x_right) with n interior nodes.
/// Node i (0-based here) sits at x_left + (i + 1) h; values outside the
/// interval are zero.
class Grid {
public:
    /// Throws DomainError unless x_left < x_right and n ≥ 3.
    Grid(double x_left, double x_right, std::size_t n);

    double x_left() const noexcept { return x_left_; }
    double x_right() const noexcept { return x_right_; }
    std::size_t size() const noexcept { return n_; }
    double h() const noexcept { return h_; }
    double length() const noexcept { return x_right_ - x_left_; }
    double node(std::size_t i) const noexcept { return x_left_ + static_cast<double>(i + 1) * h_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    double x_left_;
    double x_right_;
    std::size_t n_;
    double h_;
};

/// Nodal values on the interior nodes of a Grid.
class GridFunction {
public:
    GridFunction() = default;
    explicit GridFunction(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit GridFunction(std::vector<double> values) : values_(std::move(values)) {}
    GridFunction(std::initializer_list<double> values) : values_(values) {}

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    double* data() noexcept { return values_.data(); }
    const double* data() const noexcept { return values_.data(); }
    std::span<double> span() noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    GridFunction& operator+=(const GridFunction& other);
    GridFunction& operator-=(const GridFunction& other);
    GridFunction& operator*=(double factor) noexcept;

    friend GridFunction operator+(GridFunction lhs, const GridFunction& rhs) { return lhs += rhs; }
    friend GridFunction operator-(GridFunction lhs, const GridFunction& rhs) { return lhs -= rhs; }
    friend GridFunction operator*(GridFunction lhs, double factor) { return lhs *= factor; }
    friend GridFunction operator*(double factor, GridFunction rhs) { return rhs *= factor; }
    friend bool operator==(const GridFunction&, const GridFunction&) = default;

private:
    std::vector<double> values_;
};

/// Samples fn at the interior nodes of grid.
GridFunction sample(const Grid& grid, const std::function<double(double)>& fn);

/// h Σ v_i w_i. Throws ShapeError on length mismatch.
double inner_product_h(const GridFunction& v, const GridFunction& w, const Grid& grid);

/// Discrete L² norm sqrt(h Σ v_i²).
double norm_h(const GridFunction& v, const Grid& grid);

/// Plain Euclidean dot product in index order.
double dot(std::span<const double> x, std::span<const double> y);

}  // namespace fraclap
