#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "lsl/chart.hpp"
#include "lsl/interp.hpp"
#include "lsl/surface.hpp"

namespace lsl {

/// Strictly increasing change of one isotropic parameter, t(s) with
/// t(knots[k]) = values[k] and dt/ds = derivative[k].
class MonotoneMap {
 public:
  MonotoneMap() = default;
  /// sign: sign of the second-form coefficient the map normalises.
  MonotoneMap(std::vector<double> knots, std::vector<double> values, std::vector<double> derivative, int sign);

  const std::vector<double>& knots() const { return knots_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& derivative() const { return derivative_; }
  int sign() const { return sign_; }

  double operator()(double s) const { return forward_(s); }
  /// Source parameter of a target value.
  double inverse(double t) const { return inverse_(t); }
  /// dt/ds at an arbitrary source parameter (cubic in the stored derivative).
  double slope(double s) const;

  double range_lo() const { return values_.front(); }
  double range_hi() const { return values_.back(); }

 private:
  std::vector<double> knots_, values_, derivative_;
  int sign_ = 1;
  MonotoneHermite forward_, inverse_;
};

/// Canonical parameters with initial point (u0, v0):
///   t_u(u) = tilde_u0 + int_{u0}^{u} sqrt|L(s, v0)| ds,
///   t_v(v) = tilde_v0 + int_{v0}^{v} sqrt|N(u0, s)| ds,
/// by cumulative Simpson quadrature on the given grids (u0, v0 must be
/// nodes). Throws NotGeneralTypeError if |L| or |N| drops to tol or changes
/// sign on a base line.
std::pair<MonotoneMap, MonotoneMap> canonical_maps(const SurfaceProvider& provider, double u0, double v0,
                                                   const std::vector<double>& u_grid,
                                                   const std::vector<double>& v_grid, double tilde_u0 = 0.0,
                                                   double tilde_v0 = 0.0, double tol = 1e-8);

/// Same construction from the L and N fields of a chart, along the row
/// v0_index and the column u0_index.
std::pair<MonotoneMap, MonotoneMap> canonical_maps(const Chart& chart, double tilde_u0 = 0.0, double tilde_v0 = 0.0,
                                                   double tol = 1e-8);

/// Pulls the chart back to the canonical grids: each target node is mapped
/// to source parameters through the inverse maps, the source fields are
/// interpolated there (bicubic) and transformed with u' = du/dt_u,
/// v' = dv/dt_v:
///   F~ = F u'v', L~ = L u'^2, M~ = M u'v', N~ = N v'^2, H~ = H, K~ = K.
/// The canonical grids must contain the image of the initial point and lie
/// inside the map ranges (RangeError otherwise). When L and N are present
/// the result is checked with verify_canonical(canonical_tol) and flagged.
Chart resample_to_canonical(const Chart& chart, const std::pair<MonotoneMap, MonotoneMap>& maps,
                            const std::vector<double>& canonical_u_grid, const std::vector<double>& canonical_v_grid,
                            double canonical_tol = 1e-6);

/// Uniform grid of n nodes inside [lo, hi] with `origin` as a node; the
/// spacing is the largest one not exceeding (hi - lo) / (n - 1).
std::vector<double> anchored_grid(double lo, double hi, std::size_t n, double origin);

/// An arbitrary smooth change of one parameter, source = to_source(target).
struct Reparametrization {
  std::function<double(double)> to_source;
  std::function<double(double)> derivative;  // d source / d target, > 0
};

/// General numeration-preserving pullback used by resample_to_canonical;
/// exposed for testing non-affine changes.
Chart reparametrize(const Chart& chart, const Reparametrization& u_map, const Reparametrization& v_map,
                    const std::vector<double>& target_u_grid, const std::vector<double>& target_v_grid,
                    std::size_t u0_index, std::size_t v0_index);

struct CanonicalityReport {
  double max_dev_L = 0;  // max |L(., v0) - eps1|
  double max_dev_N = 0;  // max |N(u0, .) - eps2|
  double u0 = 0, v0 = 0;
  int eps1 = 1, eps2 = 1;
  double tolerance = 0;
  bool pass = false;
};

/// Requires L and N fields (PreconditionError otherwise).
CanonicalityReport verify_canonical(const Chart& chart, double tol);

/// Moves a canonical chart to another canonical chart with the same
/// initial point: u = delta t_u + c1, v = delta t_v + c2, followed, when
/// swap is set, by exchanging the numeration (which negates L, M, N, H and
/// maps (eps1, eps2) to (-eps2, -eps1)).
Chart canonical_gauge_transform(const Chart& chart, int delta, double c1, double c2, bool swap,
                                double canonical_tol = 1e-6);

}  // namespace lsl
