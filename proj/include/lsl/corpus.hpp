#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsl/chart.hpp"
#include "lsl/surface.hpp"

namespace lsl::corpus {

using ScalarFn = std::function<double(double, double)>;

/// Closed-form coefficients and curvatures in the entry's own isotropic
/// coordinates (E = G = 0 for every entry).
struct ReferenceFields {
  ScalarFn F, L, M, N, K, H;
};

/// Closed-form F and H in canonical coordinates, valid for one choice of
/// initial point and canonical origin.
struct CanonicalReference {
  double u0 = 0, v0 = 0;
  double tilde_u0 = 0, tilde_v0 = 0;
  ScalarFn F, H;
};

enum class Kind { first, second, degenerate };

const char* to_string(Kind k);

struct CorpusEntry {
  std::string name;
  std::string parametrization;
  std::function<MinkowskiVec(double, double)> position;
  SurfaceProvider provider;  // analytic jets
  ReferenceFields reference;
  Rectangle default_domain;
  Kind kind = Kind::first;
  std::string notes;
  std::optional<CanonicalReference> canonical;
};

/// Registered names, in a fixed order.
const std::vector<std::string>& names();

/// Throws LookupError for unknown names.
const CorpusEntry& get(std::string_view name);

/// Samples the reference fields (F, H and also L, M, N, K) of an entry on
/// the given grids. u0 and v0 must be grid nodes; eps1, eps2 are the signs
/// of L and N at the initial point (+1 where they vanish, flagged in the
/// metadata). Throws DomainError listing the nodes that hit the singular set.
Chart reference_chart(std::string_view name, const std::vector<double>& u_grid, const std::vector<double>& v_grid,
                      double u0, double v0);

}  // namespace lsl::corpus
