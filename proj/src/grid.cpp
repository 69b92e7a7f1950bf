#include "lsl/grid.hpp"

#include <algorithm>
#include <cmath>

#include "lsl/errors.hpp"

namespace lsl {

namespace {

void check_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw FormatError(std::string(name) + " grid is empty");
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (!std::isfinite(axis[k])) throw FormatError(std::string(name) + " grid has a non-finite value");
    if (k > 0 && !(axis[k] > axis[k - 1]))
      throw FormatError(std::string(name) + " grid is not strictly increasing at index " + std::to_string(k));
  }
}

}  // namespace

void Grid2D::validate() const {
  check_axis(u, "u");
  check_axis(v, "v");
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t k = 0; k < n; ++k) out[k] = lo + step * static_cast<double>(k);
  out.back() = hi;
  return out;
}

std::size_t node_index(std::span<const double> axis, double x, const std::string& what) {
  if (axis.empty()) throw PreconditionError(what + ": empty axis");
  const double span = axis.size() > 1 ? axis.back() - axis.front() : 1.0;
  const double tol = 1e-9 * std::max(span, 1e-300) + 1e-14 * std::abs(x);
  const auto it = std::lower_bound(axis.begin(), axis.end(), x);
  std::size_t best = axis.size();
  double best_gap = tol;
  for (auto cand : {it, it == axis.begin() ? it : it - 1}) {
    if (cand == axis.end()) continue;
    const double gap = std::abs(*cand - x);
    if (gap <= best_gap) {
      best_gap = gap;
      best = static_cast<std::size_t>(cand - axis.begin());
    }
  }
  if (best == axis.size())
    throw PreconditionError(what + " = " + std::to_string(x) + " is not a grid node");
  return best;
}

double max_spacing(const Grid2D& g) {
  double h = 0.0;
  for (std::size_t k = 1; k < g.nu(); ++k) h = std::max(h, g.u[k] - g.u[k - 1]);
  for (std::size_t k = 1; k < g.nv(); ++k) h = std::max(h, g.v[k] - g.v[k - 1]);
  return h;
}

}  // namespace lsl
