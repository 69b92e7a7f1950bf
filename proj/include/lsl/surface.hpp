#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lsl/grid.hpp"
#include "lsl/minkowski.hpp"

namespace lsl {

/// Position and partial derivatives up to second order at one (u, v).
struct SurfaceJet2 {
  MinkowskiVec x, x_u, x_v, x_uu, x_uv, x_vv;
};

/// First and second fundamental forms, curvatures and unit normal at a point.
struct FundamentalData {
  double E = 0, F = 0, G = 0;
  double L = 0, M = 0, N = 0;
  double K = 0, H = 0;
  MinkowskiVec l;
};

struct Rectangle {
  double u_min = 0, u_max = 0, v_min = 0, v_max = 0;

  bool contains(double u, double v) const { return u >= u_min && u <= u_max && v >= v_min && v <= v_max; }
  double diameter() const;
};

/// A parametrized surface given by its 2-jet on a rectangle, minus an
/// optional singular set.
struct SurfaceProvider {
  std::function<SurfaceJet2(double, double)> jet;
  Rectangle domain;
  std::function<bool(double, double)> singular;

  bool is_singular(double u, double v) const { return singular && singular(u, v); }
  /// Evaluates the jet; throws DomainError outside the domain or on the
  /// singular set.
  SurfaceJet2 operator()(double u, double v) const;
};

/// Provider whose derivatives are central differences of f with step h
/// (h defaults to 1e-4 times the domain diameter).
SurfaceProvider jet_from_position(std::function<MinkowskiVec(double, double)> f, const Rectangle& domain,
                                  std::optional<double> h = std::nullopt);

/// Provider with the parameter roles exchanged, (u, v) -> (v, u).
SurfaceProvider swap_parameters(const SurfaceProvider& p);

/// Forms, curvatures and normal l = cross(x_u, x_v) / sqrt(<n, n>).
/// Throws DegenerateMetricError when EG - F^2 vanishes and NotLorentzError
/// when the normal is not spacelike.
FundamentalData fundamental_forms(const SurfaceJet2& jet);

enum class SurfaceKind { general_first_kind, general_second_kind, not_general_type };

const char* to_string(SurfaceKind k);

struct Classification {
  SurfaceKind kind = SurfaceKind::not_general_type;
  double h2_minus_k = 0;   // H^2 - K
  double ln_over_f2 = 0;   // LN / F^2
  bool identity_holds = false;  // the two agree within tolerance
  double tolerance = 0;
};

/// Default dead band for H^2 - K: 1e-8 * (1 + H^2 + |K|).
double default_classify_tol(const FundamentalData& fd);

/// Classifies by the sign of H^2 - K. Requires isotropic input (|E|, |G|
/// within tolerance), otherwise throws PreconditionError.
Classification classify(const FundamentalData& fd, std::optional<double> tol = std::nullopt);

/// |E| <= tol, |G| <= tol and F > tol.
bool is_isotropic(const FundamentalData& fd, double tol);

struct PseudoArcReport {
  double max_dev_u = 0;  // max |<x_uu, x_uu> - 1| along v = v0
  double max_dev_v = 0;  // max |<x_vv, x_vv> - 1| along u = u0
  std::optional<double> degenerate_u_at;  // first u with <x_uu, x_uu> <= tol
  std::optional<double> degenerate_v_at;
  double tolerance = 0;
  bool pass = false;

  bool degenerate() const { return degenerate_u_at.has_value() || degenerate_v_at.has_value(); }
};

/// Checks whether u and v are pseudo arc-length parameters of the null
/// curves through (u0, v0). The samples are used as u values on v = v0
/// and as v values on u = u0.
PseudoArcReport pseudo_arc_check(const SurfaceProvider& provider, double u0, double v0,
                                 std::span<const double> samples, double tol);
/// Separate sample sets for the two lines.
PseudoArcReport pseudo_arc_check(const SurfaceProvider& provider, double u0, double v0,
                                 std::span<const double> u_samples, std::span<const double> v_samples, double tol);

/// Forms at every node of a sampled surface, from fourth-order finite
/// difference jets (five-point stencils, shifted inwards at the borders).
GridField<FundamentalData> analyze_mesh(const Grid2D& grid, const MeshField& mesh);

/// Forms at every node from a provider's jets; nodes in the singular set
/// are skipped and counted.
struct GridAnalysis {
  GridField<FundamentalData> forms;
  GridField<char> valid;
  std::size_t excluded = 0;
};
GridAnalysis analyze_grid(const SurfaceProvider& provider, const Grid2D& grid);

}  // namespace lsl
