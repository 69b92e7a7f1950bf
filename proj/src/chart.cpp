#include "lsl/chart.hpp"

#include <cmath>
#include <string>

#include "lsl/errors.hpp"

namespace lsl {

namespace {

void check_shape(const Grid2D& g, const Field2D& f, const char* name) {
  if (!f.same_shape(g))
    throw FormatError(std::string("field ") + name + " has shape " + std::to_string(f.nv()) + "x" +
                      std::to_string(f.nu()) + ", expected " + std::to_string(g.nv()) + "x" + std::to_string(g.nu()));
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i)
      if (!std::isfinite(f(i, j)))
        throw FormatError(std::string("field ") + name + " is not finite at node (i=" + std::to_string(i) +
                          ", j=" + std::to_string(j) + ")");
}

}  // namespace

void Chart::validate() const {
  grid.validate();
  check_shape(grid, F, "F");
  check_shape(grid, H, "H");
  if (L) check_shape(grid, *L, "L");
  if (M) check_shape(grid, *M, "M");
  if (N) check_shape(grid, *N, "N");
  if (K) check_shape(grid, *K, "K");
  if (u0_index >= grid.nu() || v0_index >= grid.nv()) throw FormatError("initial point index outside the grid");
  if ((eps1 != 1 && eps1 != -1) || (eps2 != 1 && eps2 != -1)) throw FormatError("eps1 and eps2 must be +1 or -1");
  for (std::size_t j = 0; j < grid.nv(); ++j)
    for (std::size_t i = 0; i < grid.nu(); ++i)
      if (!(F(i, j) > 0.0))
        throw FormatError("F must be positive; F = " + std::to_string(F(i, j)) + " at node (i=" + std::to_string(i) +
                          ", j=" + std::to_string(j) + "), (u, v) = (" + std::to_string(grid.u[i]) + ", " +
                          std::to_string(grid.v[j]) + ")");
}

}  // namespace lsl
