#include "lsl/natural_equation.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lsl/errors.hpp"
#include "lsl/quadrature.hpp"
#include "lsl/stencil.hpp"

namespace lsl {

namespace {

using fd::Axis;

void require_stencil_room(const Grid2D& g) {
  if (g.nu() < 3 || g.nv() < 3)
    throw StencilError("natural equation needs at least 3 nodes per axis, grid is " + std::to_string(g.nu()) + "x" +
                       std::to_string(g.nv()));
}

std::string node_str(const Grid2D& g, std::size_t i, std::size_t j) {
  return "node (i=" + std::to_string(i) + ", j=" + std::to_string(j) + "), (u, v) = (" + std::to_string(g.u[i]) +
         ", " + std::to_string(g.v[j]) + ")";
}

// Dual-cell width of node k on an axis.
double cell(const std::vector<double>& a, std::size_t k) {
  const double left = k > 0 ? a[k] - a[k - 1] : 0.0;
  const double right = k + 1 < a.size() ? a[k + 1] - a[k] : 0.0;
  return 0.5 * (left + right);
}

ResidualReport summarize(const Grid2D& g, Field2D residual) {
  ResidualReport r;
  double sum = 0.0, area = 0.0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) {
      if (i == 0 || j == 0 || i + 1 == g.nu() || j + 1 == g.nv()) {
        residual(i, j) = nan;
        continue;
      }
      const double x = residual(i, j);
      r.max_abs = std::max(r.max_abs, std::abs(x));
      const double w = cell(g.u, i) * cell(g.v, j);
      sum += x * x * w;
      area += w;
    }
  r.l2 = area > 0.0 ? std::sqrt(sum / area) : 0.0;
  r.h = max_spacing(g);
  r.residual = std::move(residual);
  return r;
}

Field2D mixed(const Grid2D& g, const Field2D& f) {
  return fd::partial(g, fd::partial(g, f, Axis::u, 1, 3), Axis::v, 1, 3);
}

}  // namespace

Chart accumulate_LN(const Chart& chart) {
  const Grid2D& g = chart.grid;
  require_stencil_room(g);
  if (!chart.F.same_shape(g) || !chart.H.same_shape(g)) throw PreconditionError("accumulate_LN: field shape mismatch");
  const Field2D Hu = fd::partial(g, chart.H, Axis::u, 1, 3);
  const Field2D Hv = fd::partial(g, chart.H, Axis::v, 1, 3);
  Chart out = chart;
  Field2D L(g), M(g), N(g), K(g);
  std::vector<double> integrand;
  integrand.resize(g.nv());
  for (std::size_t i = 0; i < g.nu(); ++i) {
    for (std::size_t j = 0; j < g.nv(); ++j) integrand[j] = chart.F(i, j) * Hu(i, j);
    const auto run = quad::cumulative_trapezoid(g.v, integrand, chart.v0_index);
    for (std::size_t j = 0; j < g.nv(); ++j) L(i, j) = chart.eps1 + run[j];
  }
  integrand.resize(g.nu());
  for (std::size_t j = 0; j < g.nv(); ++j) {
    for (std::size_t i = 0; i < g.nu(); ++i) integrand[i] = chart.F(i, j) * Hv(i, j);
    const auto run = quad::cumulative_trapezoid(g.u, integrand, chart.u0_index);
    for (std::size_t i = 0; i < g.nu(); ++i) N(i, j) = chart.eps2 + run[i];
  }
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) {
      const double F = chart.F(i, j);
      M(i, j) = F * chart.H(i, j);
      K(i, j) = (M(i, j) * M(i, j) - L(i, j) * N(i, j)) / (F * F);
    }
  out.L = std::move(L);
  out.M = std::move(M);
  out.N = std::move(N);
  out.K = std::move(K);
  return out;
}

ResidualReport gauss_residual(const Chart& chart) {
  const Grid2D& g = chart.grid;
  require_stencil_room(g);
  if (!chart.has_second_form()) throw PreconditionError("gauss_residual: chart carries no L, M, N");
  const Field2D Fu = fd::partial(g, chart.F, Axis::u, 1, 3);
  const Field2D Fv = fd::partial(g, chart.F, Axis::v, 1, 3);
  const Field2D Fuv = mixed(g, chart.F);
  const Field2D &L = *chart.L, &M = *chart.M, &N = *chart.N;
  Field2D res(g);
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) {
      const double F = chart.F(i, j);
      res(i, j) = (F * Fuv(i, j) - Fu(i, j) * Fv(i, j)) / F - (L(i, j) * N(i, j) - M(i, j) * M(i, j));
    }
  return summarize(g, std::move(res));
}

ResidualReport natural_residual(const Chart& chart) { return gauss_residual(accumulate_LN(chart)); }

ResidualReport cmc_residual(const Field2D& K, double H, const Grid2D& grid) {
  require_stencil_room(grid);
  if (!K.same_shape(grid)) throw PreconditionError("cmc_residual: K shape does not match the grid");
  Field2D lnq(grid), q(grid);
  for (std::size_t j = 0; j < grid.nv(); ++j)
    for (std::size_t i = 0; i < grid.nu(); ++i) {
      const double d = H * H - K(i, j);
      if (std::abs(d) <= 1e-10 * (1.0 + H * H + std::abs(K(i, j))))
        throw DegeneracyError("H^2 - K vanishes at " + node_str(grid, i, j));
      q(i, j) = std::sqrt(std::abs(d));
      lnq(i, j) = std::log(q(i, j));
    }
  const Field2D lnq_uv = mixed(grid, lnq);
  Field2D res(grid);
  for (std::size_t j = 0; j < grid.nv(); ++j)
    for (std::size_t i = 0; i < grid.nu(); ++i) res(i, j) = q(i, j) * lnq_uv(i, j) - K(i, j);
  return summarize(grid, std::move(res));
}

ResidualReport minimal_residual(const Field2D& K, const Grid2D& grid) {
  try {
    return cmc_residual(K, 0.0, grid);
  } catch (const DegeneracyError& e) {
    throw DegeneracyError(std::string("K vanishes: ") + e.what());
  }
}

CmcMetric F_from_K_cmc(const Field2D& K, double H) {
  CmcMetric m{Field2D(K.nu(), K.nv()), 0};
  for (std::size_t j = 0; j < K.nv(); ++j)
    for (std::size_t i = 0; i < K.nu(); ++i) {
      const double d = H * H - K(i, j);
      if (std::abs(d) <= 1e-10 * (1.0 + H * H + std::abs(K(i, j))))
        throw DegeneracyError("H^2 - K vanishes at node (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")");
      const int s = d > 0.0 ? 1 : -1;
      if (m.eps_product == 0) m.eps_product = s;
      if (s != m.eps_product)
        throw DegeneracyError("H^2 - K changes sign at node (i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                              "): the surface changes kind");
      m.F(i, j) = 1.0 / std::sqrt(std::abs(d));
    }
  if (m.eps_product == 0) m.eps_product = 1;
  return m;
}

double two_grid_order(const ResidualReport& coarse, const ResidualReport& fine) {
  return std::log(coarse.max_abs / fine.max_abs) / std::log(coarse.h / fine.h);
}

}  // namespace lsl
