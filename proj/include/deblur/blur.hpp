#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>

#include "deblur/errors.hpp"
#include "deblur/kernels.hpp"
#include "deblur/matrix.hpp"

namespace deblur {

/// Samples of a function on a Grid.
class Signal {
public:
    Signal(Grid grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
        if (values_.size() != grid_.size()) {
            throw InvalidArgument("signal has " + std::to_string(values_.size()) + " values for a grid of " +
                                  std::to_string(grid_.size()) + " points");
        }
        for (double v : values_)
            if (!std::isfinite(v)) throw InvalidArgument("signal values must be finite");
    }

    /// Wraps a plain vector on the midpoint grid of matching length.
    static Signal on_midpoints(Vector values) {
        Grid g = make_grid(values.size());
        return Signal(std::move(g), std::move(values));
    }

    const Grid& grid() const noexcept { return grid_; }
    const Vector& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const noexcept { return values_[k]; }

    operator std::span<const double>() const noexcept { return values_; }

private:
    Grid grid_;
    Vector values_;
};

/// Discretized blur operator: entry (j,k) = h(s_j, t_k)/n on the midpoint grid.
/// Built one row at a time.
inline DenseMatrix build_blur_matrix(const KernelSpec& spec, std::size_t n) {
    validate(spec);
    const Grid grid = make_grid(n);
    const double dn = static_cast<double>(n);
    DenseMatrix a(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        auto row = a.row(j);
        const double s = grid[j];
        for (std::size_t k = 0; k < n; ++k) row[k] = eval_kernel(spec, s, grid[k]) / dn;
    }
    return a;
}

/// b = A f (midpoint-rule blur of f).
inline Signal forward_blur(const DenseMatrix& a, const Signal& f) {
    if (a.cols() != f.size()) {
        throw InvalidArgument("forward_blur: operator has " + std::to_string(a.cols()) + " columns, signal has " +
                              std::to_string(f.size()) + " samples");
    }
    Vector b = multiply(a, f.values());
    if (a.rows() == f.size()) return Signal(f.grid(), std::move(b));
    return Signal::on_midpoints(std::move(b));
}

/// Ramp + step + hat test function.
inline double test_signal_value(double t) {
    const double ramp = (t >= 0.15) ? std::max(1.0 - 12.0 * (t - 0.15), 0.0) : 0.0;
    const double step = std::abs(t - 0.5) <= 0.1 ? 1.0 : 0.0;
    const double hat = std::max(1.0 - 10.0 * std::abs(t - 0.825), 0.0);
    return ramp + step + hat;
}

inline Signal test_signal(const Grid& grid) {
    Vector v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = test_signal_value(grid[k]);
    return Signal(grid, std::move(v));
}

/// Sum of |x_{j+1} - x_j|.
inline double total_variation(std::span<const double> x) {
    double tv = 0.0;
    for (std::size_t j = 1; j < x.size(); ++j) tv += std::abs(x[j] - x[j - 1]);
    return tv;
}

}  // namespace deblur
