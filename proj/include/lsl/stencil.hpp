#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lsl/grid.hpp"

namespace lsl::fd {

/// Finite-difference weights for derivatives of order 0..max_order at x0
/// from arbitrary distinct nodes (Fornberg's recursion). Row m of the
/// result holds the weights of the m-th derivative.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_order);

/// Stencil for one node of a 1-D axis: the first node index and weights.
struct Stencil {
  std::size_t first = 0;
  std::vector<double> weights;
};

/// `points`-node stencil for the `order`-th derivative at node k of `axis`,
/// centred when it fits and shifted inwards at the ends. Throws
/// StencilError if the axis has fewer than `points` nodes.
Stencil line_stencil(std::span<const double> axis, std::size_t k, int order, int points);

/// Stencils for every node of an axis.
std::vector<Stencil> line_stencils(std::span<const double> axis, int order, int points);

enum class Axis { u, v };

/// Partial derivative of a grid field along one axis.
template <class T>
GridField<T> partial(const Grid2D& g, const GridField<T>& f, Axis axis, int order = 1, int points = 3) {
  GridField<T> out(g);
  if (axis == Axis::u) {
    const auto st = line_stencils(g.u, order, points);
    for (std::size_t j = 0; j < g.nv(); ++j)
      for (std::size_t i = 0; i < g.nu(); ++i) {
        T acc{};
        const auto& s = st[i];
        for (std::size_t k = 0; k < s.weights.size(); ++k) acc += s.weights[k] * f(s.first + k, j);
        out(i, j) = acc;
      }
  } else {
    const auto st = line_stencils(g.v, order, points);
    for (std::size_t j = 0; j < g.nv(); ++j) {
      const auto& s = st[j];
      for (std::size_t i = 0; i < g.nu(); ++i) {
        T acc{};
        for (std::size_t k = 0; k < s.weights.size(); ++k) acc += s.weights[k] * f(i, s.first + k);
        out(i, j) = acc;
      }
    }
  }
  return out;
}

}  // namespace lsl::fd
