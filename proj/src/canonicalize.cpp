#include "lsl/canonicalize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsl/errors.hpp"
#include "lsl/parallel.hpp"
#include "lsl/quadrature.hpp"

namespace lsl {

namespace {

std::vector<double> reciprocal(const std::vector<double>& d) {
  std::vector<double> out(d.size());
  for (std::size_t k = 0; k < d.size(); ++k) out[k] = 1.0 / d[k];
  return out;
}

// Builds one map from second-form samples along a base line.
MonotoneMap line_map(const std::vector<double>& axis, const std::vector<double>& coeff, std::size_t base, double origin,
                     double tol, const char* coeff_name, const char* axis_name) {
  const int sign = coeff[base] < 0.0 ? -1 : 1;
  std::vector<double> root(axis.size());
  for (std::size_t k = 0; k < axis.size(); ++k) {
    const double c = coeff[k];
    if (std::abs(c) <= tol)
      throw NotGeneralTypeError(std::string(coeff_name) + " vanishes on the base line at " + axis_name + " = " +
                                std::to_string(axis[k]) + ": surface is not of general type there");
    if ((c < 0.0 ? -1 : 1) != sign)
      throw NotGeneralTypeError(std::string(coeff_name) + " changes sign on the base line at " + axis_name + " = " +
                                std::to_string(axis[k]) + ": the surface changes kind");
    root[k] = std::sqrt(std::abs(c));
  }
  auto values = quad::cumulative_simpson(axis, root, base);
  for (auto& t : values) t += origin;
  return MonotoneMap(axis, std::move(values), std::move(root), sign);
}

double clamp_to_range(double t, const MonotoneMap& m, const char* what) {
  const double span = m.range_hi() - m.range_lo();
  const double slack = 1e-12 * std::max(span, 1.0);
  if (t < m.range_lo() - slack || t > m.range_hi() + slack)
    throw RangeError(std::string("canonical ") + what + " grid value " + std::to_string(t) + " outside the map range [" +
                     std::to_string(m.range_lo()) + ", " + std::to_string(m.range_hi()) + "]");
  return std::clamp(t, m.range_lo(), m.range_hi());
}

int sign_of(double x) { return x < 0.0 ? -1 : 1; }

Field2D transpose(const Field2D& f) {
  Field2D out(f.nv(), f.nu());
  for (std::size_t j = 0; j < f.nv(); ++j)
    for (std::size_t i = 0; i < f.nu(); ++i) out(j, i) = f(i, j);
  return out;
}

Field2D scaled(const Field2D& f, double s) {
  Field2D out = f;
  for (auto& x : out.values()) x *= s;
  return out;
}

}  // namespace

MonotoneMap::MonotoneMap(std::vector<double> knots, std::vector<double> values, std::vector<double> derivative,
                         int sign)
    : knots_(std::move(knots)), values_(std::move(values)), derivative_(std::move(derivative)), sign_(sign) {
  for (std::size_t k = 0; k < derivative_.size(); ++k)
    if (!(derivative_[k] > 0.0)) throw PreconditionError("monotone map needs a positive derivative at every knot");
  for (std::size_t k = 1; k < values_.size(); ++k)
    if (!(values_[k] > values_[k - 1]))
      throw NotGeneralTypeError("canonical parameter is not strictly increasing at knot " + std::to_string(k));
  forward_ = MonotoneHermite(knots_, values_, derivative_);
  inverse_ = MonotoneHermite(values_, knots_, reciprocal(derivative_));
}

double MonotoneMap::slope(double s) const { return cubic_at(knots_, derivative_, s); }

std::pair<MonotoneMap, MonotoneMap> canonical_maps(const SurfaceProvider& provider, double u0, double v0,
                                                   const std::vector<double>& u_grid,
                                                   const std::vector<double>& v_grid, double tilde_u0, double tilde_v0,
                                                   double tol) {
  Grid2D g{u_grid, v_grid};
  g.validate();
  const std::size_t iu = node_index(u_grid, u0, "u0");
  const std::size_t jv = node_index(v_grid, v0, "v0");
  const FundamentalData base = fundamental_forms(provider(u_grid[iu], v_grid[jv]));
  if (!(base.F > 0.0)) throw PreconditionError("canonical_maps: F must be positive at the initial point");
  std::vector<double> L(u_grid.size()), N(v_grid.size());
  for (std::size_t k = 0; k < u_grid.size(); ++k) L[k] = fundamental_forms(provider(u_grid[k], v_grid[jv])).L;
  for (std::size_t k = 0; k < v_grid.size(); ++k) N[k] = fundamental_forms(provider(u_grid[iu], v_grid[k])).N;
  return {line_map(u_grid, L, iu, tilde_u0, tol, "L", "u"), line_map(v_grid, N, jv, tilde_v0, tol, "N", "v")};
}

std::pair<MonotoneMap, MonotoneMap> canonical_maps(const Chart& chart, double tilde_u0, double tilde_v0, double tol) {
  if (!chart.L || !chart.N) throw PreconditionError("canonical_maps: chart carries no L and N fields");
  std::vector<double> L(chart.grid.nu()), N(chart.grid.nv());
  for (std::size_t i = 0; i < chart.grid.nu(); ++i) L[i] = (*chart.L)(i, chart.v0_index);
  for (std::size_t j = 0; j < chart.grid.nv(); ++j) N[j] = (*chart.N)(chart.u0_index, j);
  return {line_map(chart.grid.u, L, chart.u0_index, tilde_u0, tol, "L", "u"),
          line_map(chart.grid.v, N, chart.v0_index, tilde_v0, tol, "N", "v")};
}

Chart reparametrize(const Chart& chart, const Reparametrization& u_map, const Reparametrization& v_map,
                    const std::vector<double>& target_u_grid, const std::vector<double>& target_v_grid,
                    std::size_t u0_index, std::size_t v0_index) {
  Chart out;
  out.grid = {target_u_grid, target_v_grid};
  out.grid.validate();
  if (u0_index >= out.grid.nu() || v0_index >= out.grid.nv())
    throw PreconditionError("reparametrize: initial point index outside the target grid");
  const std::size_t nu = out.grid.nu(), nv = out.grid.nv();
  std::vector<double> su(nu), sv(nv), du(nu), dv(nv);
  for (std::size_t i = 0; i < nu; ++i) {
    su[i] = u_map.to_source(target_u_grid[i]);
    du[i] = u_map.derivative(target_u_grid[i]);
  }
  for (std::size_t j = 0; j < nv; ++j) {
    sv[j] = v_map.to_source(target_v_grid[j]);
    dv[j] = v_map.derivative(target_v_grid[j]);
  }
  const Grid2D& src = chart.grid;
  const double su_slack = 1e-9 * (src.u.back() - src.u.front() + 1.0);
  const double sv_slack = 1e-9 * (src.v.back() - src.v.front() + 1.0);
  for (const double s : su)
    if (s < src.u.front() - su_slack || s > src.u.back() + su_slack)
      throw RangeError("reparametrize: source u = " + std::to_string(s) + " outside the chart");
  for (const double s : sv)
    if (s < src.v.front() - sv_slack || s > src.v.back() + sv_slack)
      throw RangeError("reparametrize: source v = " + std::to_string(s) + " outside the chart");

  const bool second = chart.has_second_form();
  out.F = Field2D(out.grid);
  out.H = Field2D(out.grid);
  if (second) out.L = out.M = out.N = Field2D(out.grid);
  if (chart.K) out.K = Field2D(out.grid);
  parallel_for(nv, [&](std::size_t j) {
    for (std::size_t i = 0; i < nu; ++i) {
      const double u = su[i], v = sv[j];
      const double up = du[i], vp = dv[j];
      out.F(i, j) = bicubic(src, chart.F, u, v) * up * vp;
      out.H(i, j) = bicubic(src, chart.H, u, v);
      if (second) {
        (*out.L)(i, j) = bicubic(src, *chart.L, u, v) * up * up;
        (*out.M)(i, j) = bicubic(src, *chart.M, u, v) * up * vp;
        (*out.N)(i, j) = bicubic(src, *chart.N, u, v) * vp * vp;
      }
      if (chart.K) (*out.K)(i, j) = bicubic(src, *chart.K, u, v);
    }
  });
  out.u0_index = u0_index;
  out.v0_index = v0_index;
  if (second) {
    out.eps1 = sign_of((*out.L)(u0_index, v0_index));
    out.eps2 = sign_of((*out.N)(u0_index, v0_index));
  } else {
    out.eps1 = chart.eps1;
    out.eps2 = chart.eps2;
  }
  out.metadata = chart.metadata;
  return out;
}

Chart resample_to_canonical(const Chart& chart, const std::pair<MonotoneMap, MonotoneMap>& maps,
                            const std::vector<double>& canonical_u_grid, const std::vector<double>& canonical_v_grid,
                            double canonical_tol) {
  const auto& [mu, mv] = maps;
  const double tu0 = mu(chart.u0());
  const double tv0 = mv(chart.v0());
  const std::size_t iu = node_index(canonical_u_grid, tu0, "image of u0 in the canonical u grid");
  const std::size_t jv = node_index(canonical_v_grid, tv0, "image of v0 in the canonical v grid");
  Reparametrization ru{[&](double t) { return mu.inverse(clamp_to_range(t, mu, "u")); },
                       [&](double t) { return 1.0 / mu.slope(mu.inverse(clamp_to_range(t, mu, "u"))); }};
  Reparametrization rv{[&](double t) { return mv.inverse(clamp_to_range(t, mv, "v")); },
                       [&](double t) { return 1.0 / mv.slope(mv.inverse(clamp_to_range(t, mv, "v"))); }};
  Chart out = reparametrize(chart, ru, rv, canonical_u_grid, canonical_v_grid, iu, jv);
  if (!out.has_second_form()) {
    out.eps1 = mu.sign();
    out.eps2 = mv.sign();
  }
  out.metadata["canonical_origin"] = std::to_string(tu0) + ", " + std::to_string(tv0);
  if (out.has_second_form()) out.canonical = verify_canonical(out, canonical_tol).pass;
  return out;
}

std::vector<double> anchored_grid(double lo, double hi, std::size_t n, double origin) {
  if (n < 2 || !(hi > lo)) throw PreconditionError("anchored_grid: need n >= 2 and hi > lo");
  if (origin < lo || origin > hi) throw RangeError("anchored_grid: origin outside [lo, hi]");
  const double last = static_cast<double>(n - 1);
  const auto k0 = static_cast<std::size_t>(std::lround((origin - lo) / (hi - lo) * last));
  double h = (hi - lo) / last;
  if (k0 > 0) h = std::min(h, (origin - lo) / static_cast<double>(k0));
  if (k0 < n - 1) h = std::min(h, (hi - origin) / static_cast<double>(n - 1 - k0));
  if (!(h > 0)) throw PreconditionError("anchored_grid: origin too close to an end for n nodes");
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = k == k0 ? origin : std::clamp(origin + (static_cast<double>(k) - static_cast<double>(k0)) * h, lo, hi);
  const double snap = 1e-12 * (hi - lo);
  if (k0 != 0 && std::abs(out.front() - lo) <= snap) out.front() = lo;
  if (k0 != n - 1 && std::abs(out.back() - hi) <= snap) out.back() = hi;
  return out;
}

CanonicalityReport verify_canonical(const Chart& chart, double tol) {
  if (!chart.L || !chart.N) throw PreconditionError("verify_canonical: chart carries no L and N fields");
  CanonicalityReport r;
  r.u0 = chart.u0();
  r.v0 = chart.v0();
  r.eps1 = chart.eps1;
  r.eps2 = chart.eps2;
  r.tolerance = tol;
  for (std::size_t i = 0; i < chart.grid.nu(); ++i)
    r.max_dev_L = std::max(r.max_dev_L, std::abs((*chart.L)(i, chart.v0_index) - chart.eps1));
  for (std::size_t j = 0; j < chart.grid.nv(); ++j)
    r.max_dev_N = std::max(r.max_dev_N, std::abs((*chart.N)(chart.u0_index, j) - chart.eps2));
  r.pass = r.max_dev_L <= tol && r.max_dev_N <= tol;
  return r;
}

Chart canonical_gauge_transform(const Chart& chart, int delta, double c1, double c2, bool swap, double canonical_tol) {
  if (delta != 1 && delta != -1) throw PreconditionError("gauge transform: delta must be +1 or -1");
  if (!chart.canonical && !verify_canonical(chart, canonical_tol).pass)
    throw PreconditionError("gauge transform: input chart is not canonical");
  const std::size_t nu = chart.grid.nu(), nv = chart.grid.nv();
  auto axis = [delta](const std::vector<double>& a, double c) {
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = delta * (a[k] - c);
    if (delta < 0) std::reverse(out.begin(), out.end());
    return out;
  };
  auto relabel = [&](const Field2D& f) {
    if (delta > 0) return f;
    Field2D out(nu, nv);
    for (std::size_t j = 0; j < nv; ++j)
      for (std::size_t i = 0; i < nu; ++i) out(nu - 1 - i, nv - 1 - j) = f(i, j);
    return out;
  };
  // u' = v' = delta, so F, L, M, N keep their values node by node.
  Chart out;
  out.grid = {axis(chart.grid.u, c1), axis(chart.grid.v, c2)};
  out.F = relabel(chart.F);
  out.H = relabel(chart.H);
  if (chart.L) out.L = relabel(*chart.L);
  if (chart.M) out.M = relabel(*chart.M);
  if (chart.N) out.N = relabel(*chart.N);
  if (chart.K) out.K = relabel(*chart.K);
  out.u0_index = delta > 0 ? chart.u0_index : nu - 1 - chart.u0_index;
  out.v0_index = delta > 0 ? chart.v0_index : nv - 1 - chart.v0_index;
  out.eps1 = chart.eps1;
  out.eps2 = chart.eps2;
  out.metadata = chart.metadata;
  if (swap) {
    Chart s;
    s.grid = {out.grid.v, out.grid.u};
    s.F = transpose(out.F);
    s.H = scaled(transpose(out.H), -1.0);
    if (out.N) s.L = scaled(transpose(*out.N), -1.0);
    if (out.M) s.M = scaled(transpose(*out.M), -1.0);
    if (out.L) s.N = scaled(transpose(*out.L), -1.0);
    if (out.K) s.K = transpose(*out.K);
    s.u0_index = out.v0_index;
    s.v0_index = out.u0_index;
    s.eps1 = -out.eps2;
    s.eps2 = -out.eps1;
    s.metadata = out.metadata;
    out = std::move(s);
  }
  out.canonical = out.has_second_form() ? verify_canonical(out, canonical_tol).pass : chart.canonical;
  return out;
}

}  // namespace lsl
