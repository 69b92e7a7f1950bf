#include "lsl/quadrature.hpp"

#include <algorithm>
#include <functional>

#include "lsl/errors.hpp"

namespace lsl::quad {

namespace {

void check(std::span<const double> x, std::span<const double> f, std::size_t base) {
  if (x.size() != f.size()) throw PreconditionError("quadrature: abscissae and samples differ in length");
  if (base >= x.size()) throw PreconditionError("quadrature: base index out of range");
}

// int_a^b (t - p)(t - q) dt, computed in coordinates shifted to a.
double product_integral(double p, double q, double a, double b) {
  const double h = b - a;
  const double pp = p - a;
  const double qq = q - a;
  return h * h * h / 3.0 - (pp + qq) * h * h / 2.0 + pp * qq * h;
}

using Rule = std::function<std::vector<double>(std::span<const double>, std::span<const double>, std::size_t)>;

// Applies a forward (k >= base) rule on both sides of base.
std::vector<double> two_sided(std::span<const double> x, std::span<const double> f, std::size_t base,
                              const Rule& forward) {
  check(x, f, base);
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  const auto right = forward(x, f, base);
  for (std::size_t k = base; k < n; ++k) out[k] = right[k];
  if (base > 0) {
    std::vector<double> rx(n), rf(n);
    for (std::size_t k = 0; k < n; ++k) {
      rx[k] = -x[n - 1 - k];
      rf[k] = f[n - 1 - k];
    }
    const std::size_t rbase = n - 1 - base;
    const auto left = forward(rx, rf, rbase);
    for (std::size_t k = 0; k < base; ++k) out[k] = -left[n - 1 - k];
  }
  return out;
}

std::vector<double> trapezoid_forward(std::span<const double> x, std::span<const double> f, std::size_t base) {
  std::vector<double> out(x.size(), 0.0);
  for (std::size_t k = base + 1; k < x.size(); ++k)
    out[k] = out[k - 1] + 0.5 * (x[k] - x[k - 1]) * (f[k] + f[k - 1]);
  return out;
}

std::vector<double> simpson_forward(std::span<const double> x, std::span<const double> f, std::size_t base) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  if (n == 2) return trapezoid_forward(x, f, base);
  for (std::size_t k = base + 2; k < n; k += 2) {
    const auto w = quadratic_weights(x[k - 2], x[k - 1], x[k], x[k - 2], x[k]);
    out[k] = out[k - 2] + w[0] * f[k - 2] + w[1] * f[k - 1] + w[2] * f[k];
  }
  for (std::size_t k = base + 1; k < n; k += 2) {
    const std::size_t s = k + 1 < n ? k - 1 : k - 2;
    const auto w = quadratic_weights(x[s], x[s + 1], x[s + 2], x[k - 1], x[k]);
    out[k] = out[k - 1] + w[0] * f[s] + w[1] * f[s + 1] + w[2] * f[s + 2];
  }
  return out;
}

}  // namespace

std::vector<double> quadratic_weights(double x0, double x1, double x2, double a, double b) {
  return {product_integral(x1, x2, a, b) / ((x0 - x1) * (x0 - x2)),
          product_integral(x0, x2, a, b) / ((x1 - x0) * (x1 - x2)),
          product_integral(x0, x1, a, b) / ((x2 - x0) * (x2 - x1))};
}

std::vector<double> cumulative_trapezoid(std::span<const double> x, std::span<const double> f, std::size_t base) {
  return two_sided(x, f, base, trapezoid_forward);
}

std::vector<double> cumulative_simpson(std::span<const double> x, std::span<const double> f, std::size_t base) {
  return two_sided(x, f, base, simpson_forward);
}

}  // namespace lsl::quad
