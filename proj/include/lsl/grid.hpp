#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lsl/minkowski.hpp"

namespace lsl {

/// Rectangular parameter grid; both axes strictly increasing.
struct Grid2D {
  std::vector<double> u;
  std::vector<double> v;

  std::size_t nu() const { return u.size(); }
  std::size_t nv() const { return v.size(); }
  std::size_t size() const { return u.size() * v.size(); }

  /// Throws FormatError if an axis is empty or not strictly increasing.
  void validate() const;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

/// Index of the node equal to x up to 1e-9 relative to the axis span;
/// throws PreconditionError naming `what` if there is none.
std::size_t node_index(std::span<const double> axis, double x, const std::string& what);

/// Values on the nodes of a Grid2D, stored row-major with v as the row
/// (slow) index: element (i, j) sits at j * nu + i.
template <class T>
class GridField {
 public:
  GridField() = default;
  GridField(std::size_t nu, std::size_t nv, const T& fill = T{})
      : nu_(nu), nv_(nv), data_(nu * nv, fill) {}
  explicit GridField(const Grid2D& g, const T& fill = T{}) : GridField(g.nu(), g.nv(), fill) {}

  std::size_t nu() const { return nu_; }
  std::size_t nv() const { return nv_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[j * nu_ + i]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[j * nu_ + i]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }

  bool same_shape(const Grid2D& g) const { return nu_ == g.nu() && nv_ == g.nv(); }

  friend bool operator==(const GridField&, const GridField&) = default;

 private:
  std::size_t nu_ = 0;
  std::size_t nv_ = 0;
  std::vector<T> data_;
};

using Field2D = GridField<double>;
using MeshField = GridField<MinkowskiVec>;

/// Samples f(u, v) on every node.
template <class Fn>
Field2D sample(const Grid2D& g, Fn&& f) {
  Field2D out(g);
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) out(i, j) = f(g.u[i], g.v[j]);
  return out;
}

/// Maximum spacing over both axes.
double max_spacing(const Grid2D& g);

}  // namespace lsl
