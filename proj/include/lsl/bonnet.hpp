#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "lsl/chart.hpp"
#include "lsl/grid.hpp"
#include "lsl/minkowski.hpp"

namespace lsl {

/// Moving frame (X = x_u, Y = x_v, unit normal l) and position at a node.
struct FrameState {
  MinkowskiVec X, Y, l, x;
};

/// Largest deviation of X^2, Y^2, <X,Y> - F, l^2 - 1, <X,l>, <Y,l> from 0.
double frame_defect(const FrameState& s, double F);

/// Initial frame for a march starting where F = F0 > 0. Without a custom
/// seed: X = (1,1,0), Y = (F0/2)(-1,1,0), l = (0,0,1), x = 0. A custom seed
/// must be null in X and Y, have <X,Y> = F0, a unit normal orthogonal to
/// both and det(X,Y,l) > 0, each within 1e-10 (1 + F0); otherwise
/// InvalidFrameError.
FrameState initial_frame(double F0, const std::optional<FrameState>& custom = std::nullopt);

struct FormMismatch {
  bool evaluated = false;
  double F_max = 0;  // max |F(mesh) - F(input)|
  double H_max = 0;  // max |H(mesh) - H(input)|
};

struct ReconstructionResult {
  Grid2D grid;
  /// Input chart with the L, M, N, K actually used for marching.
  Chart chart;
  MeshField mesh;
  GridField<FrameState> frames;
  /// Per interior node: max of |D_v X - D_u Y| and of the cross derivative
  /// mismatch of l (Euclidean norm of components); NaN on the border.
  Field2D compat_residual;
  Field2D invariant_drift;
  FormMismatch form_mismatch;
  double compat_max = 0;
  double drift_max = 0;
  double natural_residual_max = 0;
  double natural_warn_threshold = 0;
  bool natural_warning = false;
  /// Largest distance between this mesh and the one obtained by marching
  /// the v-column through u0 first and then every u-row.
  std::optional<double> transposed_gap;
};

struct ReconstructOptions {
  bool transposed_probe = true;
  bool form_check = true;
};

/// Integrates the Frenet-type system for (X, Y, l) and x_u = X, x_v = Y
/// with classic RK4: first along the base row v = v0 (u-equations) from
/// the initial point, then up and down every column (v-equations).
/// L, M, N come from accumulate_LN; coefficients at RK substeps come from
/// the local cubic through the neighbouring nodes. Frames are never
/// re-normalised. Throws ReconstructionAbort naming the node where F <= 0
/// or the state stops being finite.
ReconstructionResult reconstruct(const Chart& chart, const std::optional<FrameState>& seed = std::nullopt,
                                 const ReconstructOptions& options = {});

/// The two constant-mean-curvature surfaces with the given K and H != 0:
/// F = 1 / sqrt|H^2 - K| and both eps pairs with eps1 eps2 = sign(H^2 - K);
/// first the pair with eps1 = +1, then eps1 = -1.
std::pair<ReconstructionResult, ReconstructionResult> cmc_pair(const Field2D& K, double H, const Grid2D& grid,
                                                               std::size_t u0_index, std::size_t v0_index,
                                                               const std::optional<FrameState>& seed = std::nullopt);

/// Minimal surface with Gauss curvature K: H = 0, F = 1/sqrt|K|,
/// (eps1, eps2) = (+1, sign(-K)). Refuses (PreconditionError) when
/// minimal_residual exceeds 1e-3 (1 + max|K|) unless force is set.
ReconstructionResult minimal_from_K(const Field2D& K, const Grid2D& grid, std::size_t u0_index,
                                    std::size_t v0_index, const std::optional<FrameState>& seed = std::nullopt,
                                    bool force = false);

enum class Congruence { congruent, non_proper, not_congruent };

const char* to_string(Congruence c);

struct CongruenceReport {
  double F_mismatch = 0;
  double L_mismatch = 0;
  double M_mismatch = 0;
  double N_mismatch = 0;
  double flipped_mismatch = 0;  // max over L, M, N of |a + b|
  double tolerance = 0;
  Congruence verdict = Congruence::not_congruent;
};

/// Intrinsic comparison: forms of both meshes from the same finite
/// difference jets. Congruent when F, L, M, N agree; non-proper when F
/// agrees and L, M, N agree after a global sign flip. Default tolerance
/// 1e-6 (1 + max |form|).
CongruenceReport congruence_check(const MeshField& a, const MeshField& b, const Grid2D& grid,
                                  std::optional<double> tol = std::nullopt);

}  // namespace lsl
