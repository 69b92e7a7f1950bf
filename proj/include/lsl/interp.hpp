#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lsl/grid.hpp"

namespace lsl {

/// Index k of the interval [axis[k], axis[k+1]] containing x, clamped to
/// the first/last interval for points outside the axis.
std::size_t interval_index(std::span<const double> axis, double x);

/// The Lagrange polynomial through up to four consecutive samples around
/// one interval of a 1-D axis (cubic when the axis has four nodes or
/// more). Value and derivative come from the same polynomial, so an ODE
/// stepping across that interval sees consistent coefficients.
class LocalCubic {
 public:
  LocalCubic(std::span<const double> axis, std::span<const double> values, std::size_t interval);

  double value(double x) const;
  double derivative(double x) const;

 private:
  std::array<double, 4> x_{};
  std::array<double, 4> y_{};
  std::size_t n_ = 0;
};

/// Piecewise cubic interpolation of a sampled 1-D function.
double cubic_at(std::span<const double> axis, std::span<const double> values, double x);

/// Tensor-product cubic interpolation of a grid field.
double bicubic(const Grid2D& g, const Field2D& f, double u, double v);

/// C1 monotone cubic Hermite interpolant. Slopes supplied at the knots are
/// kept where they are compatible with monotonicity and limited
/// (Fritsch-Carlson) where they are not.
class MonotoneHermite {
 public:
  MonotoneHermite() = default;
  /// knots strictly increasing; values strictly increasing.
  MonotoneHermite(std::vector<double> knots, std::vector<double> values, std::vector<double> slopes);

  double operator()(double x) const;
  double derivative(double x) const;

  double lo() const { return knots_.front(); }
  double hi() const { return knots_.back(); }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace lsl
