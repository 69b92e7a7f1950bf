#include "lsl/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lsl/errors.hpp"
#include "lsl/stencil.hpp"

namespace lsl {

namespace {

std::string point_str(double u, double v) { return "(" + std::to_string(u) + ", " + std::to_string(v) + ")"; }

double sq_norm(const MinkowskiVec& a) { return a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3; }

}  // namespace

double Rectangle::diameter() const { return std::hypot(u_max - u_min, v_max - v_min); }

SurfaceJet2 SurfaceProvider::operator()(double u, double v) const {
  if (!domain.contains(u, v)) throw DomainError("surface evaluated outside its domain at " + point_str(u, v));
  if (is_singular(u, v)) throw DomainError("surface evaluated on its singular set at " + point_str(u, v));
  return jet(u, v);
}

SurfaceProvider jet_from_position(std::function<MinkowskiVec(double, double)> f, const Rectangle& domain,
                                  std::optional<double> h) {
  const double step = h ? *h : 1e-4 * domain.diameter();
  if (!(step > 0.0)) throw PreconditionError("jet_from_position: step must be positive");
  SurfaceProvider p;
  p.domain = domain;
  p.jet = [f = std::move(f), step](double u, double v) {
    const MinkowskiVec c = f(u, v);
    const MinkowskiVec up = f(u + step, v), um = f(u - step, v);
    const MinkowskiVec vp = f(u, v + step), vm = f(u, v - step);
    const MinkowskiVec pp = f(u + step, v + step), pm = f(u + step, v - step);
    const MinkowskiVec mp = f(u - step, v + step), mm = f(u - step, v - step);
    SurfaceJet2 j;
    j.x = c;
    j.x_u = (up - um) / (2 * step);
    j.x_v = (vp - vm) / (2 * step);
    j.x_uu = (up - 2.0 * c + um) / (step * step);
    j.x_vv = (vp - 2.0 * c + vm) / (step * step);
    j.x_uv = (pp - pm - mp + mm) / (4 * step * step);
    return j;
  };
  return p;
}

SurfaceProvider swap_parameters(const SurfaceProvider& p) {
  SurfaceProvider s;
  s.domain = {p.domain.v_min, p.domain.v_max, p.domain.u_min, p.domain.u_max};
  s.jet = [jet = p.jet](double u, double v) {
    const SurfaceJet2 j = jet(v, u);
    return SurfaceJet2{j.x, j.x_v, j.x_u, j.x_vv, j.x_uv, j.x_uu};
  };
  if (p.singular) s.singular = [sing = p.singular](double u, double v) { return sing(v, u); };
  return s;
}

FundamentalData fundamental_forms(const SurfaceJet2& jet) {
  FundamentalData fd;
  fd.E = inner(jet.x_u, jet.x_u);
  fd.F = inner(jet.x_u, jet.x_v);
  fd.G = inner(jet.x_v, jet.x_v);
  const double det1 = fd.E * fd.G - fd.F * fd.F;
  const double scale = sq_norm(jet.x_u) * sq_norm(jet.x_v);
  if (!(std::abs(det1) > 1e-14 * scale)) throw DegenerateMetricError("EG - F^2 vanishes: tangent vectors are dependent");
  const MinkowskiVec n = cross(jet.x_u, jet.x_v);
  const double nn = inner(n, n);
  if (!(nn > 0.0)) throw NotLorentzError("normal direction is not spacelike (not a Lorentz surface)");
  fd.l = n / std::sqrt(nn);
  fd.L = inner(jet.x_uu, fd.l);
  fd.M = inner(jet.x_uv, fd.l);
  fd.N = inner(jet.x_vv, fd.l);
  fd.K = (fd.L * fd.N - fd.M * fd.M) / det1;
  fd.H = (fd.E * fd.N - 2 * fd.F * fd.M + fd.G * fd.L) / (2 * det1);
  return fd;
}

const char* to_string(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::general_first_kind:
      return "general_first_kind";
    case SurfaceKind::general_second_kind:
      return "general_second_kind";
    case SurfaceKind::not_general_type:
      return "not_general_type";
  }
  return "unknown";
}

double default_classify_tol(const FundamentalData& fd) { return 1e-8 * (1.0 + fd.H * fd.H + std::abs(fd.K)); }

Classification classify(const FundamentalData& fd, std::optional<double> tol) {
  const double iso_tol = 1e-6 * (1.0 + std::abs(fd.F));
  if (std::abs(fd.E) > iso_tol || std::abs(fd.G) > iso_tol || !(fd.F > 0.0))
    throw PreconditionError("classify: forms are not in isotropic coordinates with F > 0");
  Classification c;
  c.tolerance = tol ? *tol : default_classify_tol(fd);
  c.h2_minus_k = fd.H * fd.H - fd.K;
  c.ln_over_f2 = fd.L * fd.N / (fd.F * fd.F);
  c.identity_holds = std::abs(c.h2_minus_k - c.ln_over_f2) <= c.tolerance;
  if (c.h2_minus_k > c.tolerance)
    c.kind = SurfaceKind::general_first_kind;
  else if (c.h2_minus_k < -c.tolerance)
    c.kind = SurfaceKind::general_second_kind;
  else
    c.kind = SurfaceKind::not_general_type;
  return c;
}

bool is_isotropic(const FundamentalData& fd, double tol) {
  return std::abs(fd.E) <= tol && std::abs(fd.G) <= tol && fd.F > tol;
}

PseudoArcReport pseudo_arc_check(const SurfaceProvider& provider, double u0, double v0,
                                 std::span<const double> u_samples, std::span<const double> v_samples, double tol) {
  PseudoArcReport r;
  r.tolerance = tol;
  for (const double s : u_samples) {
    const SurfaceJet2 ju = provider(s, v0);
    const double quu = inner(ju.x_uu, ju.x_uu);
    if (quu <= tol && !r.degenerate_u_at) r.degenerate_u_at = s;
    r.max_dev_u = std::max(r.max_dev_u, std::abs(quu - 1.0));
  }
  for (const double s : v_samples) {
    const SurfaceJet2 jv = provider(u0, s);
    const double qvv = inner(jv.x_vv, jv.x_vv);
    if (qvv <= tol && !r.degenerate_v_at) r.degenerate_v_at = s;
    r.max_dev_v = std::max(r.max_dev_v, std::abs(qvv - 1.0));
  }
  r.pass = !r.degenerate() && r.max_dev_u <= tol && r.max_dev_v <= tol;
  return r;
}

PseudoArcReport pseudo_arc_check(const SurfaceProvider& provider, double u0, double v0,
                                 std::span<const double> samples, double tol) {
  return pseudo_arc_check(provider, u0, v0, samples, samples, tol);
}

GridField<FundamentalData> analyze_mesh(const Grid2D& grid, const MeshField& mesh) {
  if (!mesh.same_shape(grid)) throw PreconditionError("analyze_mesh: mesh shape does not match grid");
  const auto xu = fd::partial(grid, mesh, fd::Axis::u, 1, 5);
  const auto xv = fd::partial(grid, mesh, fd::Axis::v, 1, 5);
  const auto xuu = fd::partial(grid, mesh, fd::Axis::u, 2, 5);
  const auto xvv = fd::partial(grid, mesh, fd::Axis::v, 2, 5);
  const auto xuv = fd::partial(grid, xu, fd::Axis::v, 1, 5);
  GridField<FundamentalData> out(grid);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < grid.nv(); ++j)
    for (std::size_t i = 0; i < grid.nu(); ++i) {
      try {
        out(i, j) = fundamental_forms({mesh(i, j), xu(i, j), xv(i, j), xuu(i, j), xuv(i, j), xvv(i, j)});
      } catch (const Error&) {
        out(i, j) = FundamentalData{nan, nan, nan, nan, nan, nan, nan, nan, {nan, nan, nan}};
      }
    }
  return out;
}

GridAnalysis analyze_grid(const SurfaceProvider& provider, const Grid2D& grid) {
  GridAnalysis a{GridField<FundamentalData>(grid), GridField<char>(grid, 0), 0};
  for (std::size_t j = 0; j < grid.nv(); ++j)
    for (std::size_t i = 0; i < grid.nu(); ++i) {
      if (provider.is_singular(grid.u[i], grid.v[j])) {
        ++a.excluded;
        continue;
      }
      a.forms(i, j) = fundamental_forms(provider(grid.u[i], grid.v[j]));
      a.valid(i, j) = 1;
    }
  return a;
}

}  // namespace lsl
