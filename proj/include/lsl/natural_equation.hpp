#pragma once

#include <optional>

#include "lsl/chart.hpp"

namespace lsl {

/// Residual of a natural-equation form on the grid interior. Border nodes,
/// where the centred cross stencil does not exist, hold NaN and are left
/// out of every summary.
struct ResidualReport {
  Field2D residual;
  double max_abs = 0;
  double l2 = 0;  // area-weighted RMS over the interior
  double h = 0;   // largest grid spacing
  std::optional<double> h_order_estimate;
};

/// Fills L, M, N (and K) from F, H and the signs:
///   L = eps1 + int_{v0}^{v} F H_u ds,  N = eps2 + int_{u0}^{u} F H_v ds,  M = F H,
/// with cumulative trapezoid integrals (signed on the near side of the
/// base point) and H_u, H_v from three-point differences. Throws
/// StencilError for grids with fewer than three nodes per axis.
Chart accumulate_LN(const Chart& chart);

/// (F F_uv - F_u F_v) / F - (L N - M^2) for a chart that carries L, M, N.
ResidualReport gauss_residual(const Chart& chart);

/// The general natural equation: gauss_residual of accumulate_LN(chart).
ResidualReport natural_residual(const Chart& chart);

/// sqrt|H^2 - K| (ln sqrt|H^2 - K|)_uv - K for constant H. Throws
/// DegeneracyError naming the first node where |H^2 - K| is within
/// 1e-10 (1 + H^2 + |K|) of zero.
ResidualReport cmc_residual(const Field2D& K, double H, const Grid2D& grid);

/// cmc_residual with H = 0.
ResidualReport minimal_residual(const Field2D& K, const Grid2D& grid);

struct CmcMetric {
  Field2D F;
  int eps_product = 1;  // eps1 * eps2 = sign(H^2 - K)
};

/// F = 1 / sqrt|H^2 - K|; H^2 - K must keep one sign on the whole grid.
CmcMetric F_from_K_cmc(const Field2D& K, double H);

/// Observed order log(max_coarse / max_fine) / log(h_coarse / h_fine).
double two_grid_order(const ResidualReport& coarse, const ResidualReport& fine);

}  // namespace lsl
