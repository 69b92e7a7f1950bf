#include "lsl/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsl/errors.hpp"

namespace lsl {

std::size_t interval_index(std::span<const double> axis, double x) {
  if (axis.size() < 2) return 0;
  const auto it = std::upper_bound(axis.begin(), axis.end(), x);
  std::size_t k = it == axis.begin() ? 0 : static_cast<std::size_t>(it - axis.begin()) - 1;
  return std::min(k, axis.size() - 2);
}

LocalCubic::LocalCubic(std::span<const double> axis, std::span<const double> values, std::size_t interval) {
  n_ = std::min<std::size_t>(4, axis.size());
  if (n_ == 0) throw PreconditionError("LocalCubic: empty axis");
  std::size_t first = interval >= 1 ? interval - 1 : 0;
  first = std::min(first, axis.size() - n_);
  for (std::size_t k = 0; k < n_; ++k) {
    x_[k] = axis[first + k];
    y_[k] = values[first + k];
  }
}

double LocalCubic::value(double x) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < n_; ++a) {
    double w = 1.0;
    for (std::size_t b = 0; b < n_; ++b)
      if (b != a) w *= (x - x_[b]) / (x_[a] - x_[b]);
    acc += w * y_[a];
  }
  return acc;
}

double LocalCubic::derivative(double x) const {
  double acc = 0.0;
  for (std::size_t a = 0; a < n_; ++a) {
    double denom = 1.0;
    for (std::size_t b = 0; b < n_; ++b)
      if (b != a) denom *= x_[a] - x_[b];
    // d/dx prod_{b != a} (x - x_b)
    double sum = 0.0;
    for (std::size_t c = 0; c < n_; ++c) {
      if (c == a) continue;
      double prod = 1.0;
      for (std::size_t b = 0; b < n_; ++b)
        if (b != a && b != c) prod *= x - x_[b];
      sum += prod;
    }
    acc += sum / denom * y_[a];
  }
  return acc;
}

double cubic_at(std::span<const double> axis, std::span<const double> values, double x) {
  return LocalCubic(axis, values, interval_index(axis, x)).value(x);
}

double bicubic(const Grid2D& g, const Field2D& f, double u, double v) {
  const std::size_t ku = interval_index(g.u, u);
  const std::size_t kv = interval_index(g.v, v);
  const std::size_t nu = std::min<std::size_t>(4, g.nu());
  const std::size_t nv = std::min<std::size_t>(4, g.nv());
  const std::size_t iu = std::min(ku >= 1 ? ku - 1 : 0, g.nu() - nu);
  const std::size_t jv = std::min(kv >= 1 ? kv - 1 : 0, g.nv() - nv);
  std::array<double, 4> col{};
  for (std::size_t b = 0; b < nv; ++b) {
    std::array<double, 4> row{};
    for (std::size_t a = 0; a < nu; ++a) row[a] = f(iu + a, jv + b);
    col[b] = LocalCubic(std::span(g.u).subspan(iu, nu), std::span<const double>(row.data(), nu),
                        ku - iu)
                 .value(u);
  }
  return LocalCubic(std::span(g.v).subspan(jv, nv), std::span<const double>(col.data(), nv), kv - jv).value(v);
}

MonotoneHermite::MonotoneHermite(std::vector<double> knots, std::vector<double> values, std::vector<double> slopes)
    : knots_(std::move(knots)), values_(std::move(values)), slopes_(std::move(slopes)) {
  const std::size_t n = knots_.size();
  if (n < 2 || values_.size() != n || slopes_.size() != n)
    throw PreconditionError("MonotoneHermite: need at least two knots with matching values and slopes");
  for (std::size_t k = 1; k < n; ++k) {
    if (!(knots_[k] > knots_[k - 1])) throw PreconditionError("MonotoneHermite: knots not strictly increasing");
    if (!(values_[k] > values_[k - 1]))
      throw PreconditionError("MonotoneHermite: values not strictly increasing at knot " + std::to_string(k));
  }
  for (auto& d : slopes_) d = std::max(d, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double secant = (values_[k + 1] - values_[k]) / (knots_[k + 1] - knots_[k]);
    const double a = slopes_[k] / secant;
    const double b = slopes_[k + 1] / secant;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double t = 3.0 / std::sqrt(r);
      slopes_[k] = t * a * secant;
      slopes_[k + 1] = t * b * secant;
    }
  }
}

double MonotoneHermite::operator()(double x) const {
  if (x < knots_.front() || x > knots_.back())
    throw RangeError("monotone map evaluated at " + std::to_string(x) + " outside [" + std::to_string(knots_.front()) +
                     ", " + std::to_string(knots_.back()) + "]");
  const std::size_t k = interval_index(knots_, x);
  const double h = knots_[k + 1] - knots_[k];
  const double t = (x - knots_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * values_[k] + (t3 - 2 * t2 + t) * h * slopes_[k] + (-2 * t3 + 3 * t2) * values_[k + 1] +
         (t3 - t2) * h * slopes_[k + 1];
}

double MonotoneHermite::derivative(double x) const {
  if (x < knots_.front() || x > knots_.back())
    throw RangeError("monotone map derivative at " + std::to_string(x) + " outside its range");
  const std::size_t k = interval_index(knots_, x);
  const double h = knots_[k + 1] - knots_[k];
  const double t = (x - knots_[k]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * values_[k] + (-6 * t2 + 6 * t) * values_[k + 1]) / h + (3 * t2 - 4 * t + 1) * slopes_[k] +
         (3 * t2 - 2 * t) * slopes_[k + 1];
}

}  // namespace lsl
