#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>

#include "lsl/grid.hpp"

namespace lsl {

/// Scalar fields of a surface sampled on a rectangular parameter grid,
/// together with the initial point (u0, v0) and the signs eps1, eps2 used
/// by the canonical normalisation L(u, v0) = eps1, N(u0, v) = eps2.
struct Chart {
  Grid2D grid;
  Field2D F;
  Field2D H;
  std::optional<Field2D> L, M, N, K;
  std::size_t u0_index = 0;
  std::size_t v0_index = 0;
  int eps1 = 1;
  int eps2 = 1;
  /// Set once verify_canonical has passed on this chart.
  bool canonical = false;
  std::map<std::string, std::string> metadata;

  double u0() const { return grid.u.at(u0_index); }
  double v0() const { return grid.v.at(v0_index); }

  /// Shapes, base indices, eps values and F > 0; throws FormatError naming
  /// the first offending node.
  void validate() const;

  bool has_second_form() const { return L && M && N; }
};

}  // namespace lsl
