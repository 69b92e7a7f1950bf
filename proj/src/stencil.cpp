#include "lsl/stencil.hpp"

#include <algorithm>
#include <string>

#include "lsl/errors.hpp"

namespace lsl::fd {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order) {
  const std::size_t n = nodes.size();
  const auto m = static_cast<std::size_t>(max_order);
  std::vector<std::vector<double>> c(m + 1, std::vector<double>(n, 0.0));
  if (n == 0) return c;
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k)
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

Stencil line_stencil(std::span<const double> axis, std::size_t k, int order, int points) {
  const auto p = static_cast<std::size_t>(points);
  if (points < order + 1 || axis.size() < p)
    throw StencilError("a " + std::to_string(points) + "-point stencil needs at least " + std::to_string(points) +
                       " nodes, axis has " + std::to_string(axis.size()));
  const std::size_t half = p / 2;
  std::size_t first = k >= half ? k - half : 0;
  first = std::min(first, axis.size() - p);
  auto w = fornberg_weights(axis[k], axis.subspan(first, p), order);
  return {first, std::move(w[static_cast<std::size_t>(order)])};
}

std::vector<Stencil> line_stencils(std::span<const double> axis, int order, int points) {
  std::vector<Stencil> out;
  out.reserve(axis.size());
  for (std::size_t k = 0; k < axis.size(); ++k) out.push_back(line_stencil(axis, k, order, points));
  return out;
}

}  // namespace lsl::fd
