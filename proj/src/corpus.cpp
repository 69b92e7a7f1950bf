#include "lsl/corpus.hpp"

#include <cmath>
#include <numbers>

#include "lsl/errors.hpp"

namespace lsl::corpus {

namespace {

constexpr double sqrt3 = std::numbers::sqrt3;

// Provider domain: the parametrizations are analytic far beyond the
// default domains, so evaluation is allowed on a generous rectangle.
constexpr Rectangle kWide{-20.0, 20.0, -20.0, 20.0};

// Builds (u, v) jets from partials in a = u - v, b = u + v:
// d/du = d/da + d/db, d/dv = -d/da + d/db.
SurfaceJet2 from_ab(const MinkowskiVec& x, const MinkowskiVec& xa, const MinkowskiVec& xb, const MinkowskiVec& xaa,
                    const MinkowskiVec& xab, const MinkowskiVec& xbb) {
  return {x, xa + xb, xb - xa, xaa + 2.0 * xab + xbb, xbb - xaa, xaa - 2.0 * xab + xbb};
}

double sech(double t) { return 1.0 / std::cosh(t); }

CorpusEntry enneper(bool second) {
  const double s = second ? 1.0 : -1.0;  // sign of the 3v^2 term
  CorpusEntry e;
  e.name = second ? "enneper2" : "enneper1";
  e.parametrization = second ? "x = (1/6)(u^3 - v^3 + 3u - 3v, -u^3 + v^3 + 3u - 3v, 3u^2 + 3v^2)"
                             : "x = (1/6)(u^3 - v^3 + 3u - 3v, -u^3 + v^3 + 3u - 3v, 3u^2 - 3v^2)";
  e.position = [s](double u, double v) {
    return MinkowskiVec{(u * u * u - v * v * v + 3 * u - 3 * v) / 6, (-u * u * u + v * v * v + 3 * u - 3 * v) / 6,
                        (3 * u * u + s * 3 * v * v) / 6};
  };
  e.provider.domain = kWide;
  e.provider.jet = [s, pos = e.position](double u, double v) {
    SurfaceJet2 j;
    j.x = pos(u, v);
    j.x_u = {(u * u + 1) / 2, (1 - u * u) / 2, u};
    j.x_v = {-(v * v + 1) / 2, (v * v - 1) / 2, s * v};
    j.x_uu = {u, -u, 1};
    j.x_uv = {0, 0, 0};
    j.x_vv = {-v, v, s};
    return j;
  };
  if (second) {
    e.provider.singular = [](double u, double v) { return std::abs(u + v) <= 1e-12 * (1 + std::abs(u) + std::abs(v)); };
    e.reference.F = [](double u, double v) { return 0.5 * (u + v) * (u + v); };
    e.reference.N = [](double, double) { return -1.0; };
    e.reference.K = [](double u, double v) { return 4.0 / std::pow(u + v, 4); };
    e.default_domain = {0.5, 1.5, 0.5, 1.5};
    e.kind = Kind::second;
    e.notes = "minimal Enneper-type surface, canonical coordinates with L = 1, N = -1; singular on u + v = 0";
  } else {
    e.provider.singular = [](double u, double v) { return std::abs(u - v) <= 1e-12 * (1 + std::abs(u) + std::abs(v)); };
    e.reference.F = [](double u, double v) { return 0.5 * (u - v) * (u - v); };
    e.reference.N = [](double, double) { return 1.0; };
    e.reference.K = [](double u, double v) { return -4.0 / std::pow(u - v, 4); };
    e.default_domain = {1.0, 2.0, -1.0, 0.0};
    e.kind = Kind::first;
    e.notes = "minimal Enneper-type surface, canonical coordinates with L = N = 1; singular on u = v";
  }
  e.reference.L = [](double, double) { return 1.0; };
  e.reference.M = [](double, double) { return 0.0; };
  e.reference.H = [](double, double) { return 0.0; };
  return e;
}

CorpusEntry lorentz_sphere() {
  CorpusEntry e;
  e.name = "lorentz_sphere";
  e.parametrization = "x = (sinh(u - v) sech(u + v), cosh(u - v) sech(u + v), tanh(u + v))";
  e.position = [](double u, double v) {
    const double a = u - v, b = u + v;
    return MinkowskiVec{std::sinh(a) * sech(b), std::cosh(a) * sech(b), std::tanh(b)};
  };
  e.provider.domain = kWide;
  e.provider.jet = [pos = e.position](double u, double v) {
    const double a = u - v, b = u + v;
    const double sa = std::sinh(a), ca = std::cosh(a);
    const double S = sech(b), T = std::tanh(b);
    const double Sbb = S * T * T - S * S * S;  // (sech b)''
    return from_ab(pos(u, v), {ca * S, sa * S, 0}, {-sa * S * T, -ca * S * T, S * S}, {sa * S, ca * S, 0},
                   {-ca * S * T, -sa * S * T, 0}, {sa * Sbb, ca * Sbb, -2 * S * S * T});
  };
  e.reference.F = [](double u, double v) { return 2.0 * sech(u + v) * sech(u + v); };
  e.reference.L = [](double, double) { return 0.0; };
  e.reference.M = [](double u, double v) { return 2.0 * sech(u + v) * sech(u + v); };
  e.reference.N = [](double, double) { return 0.0; };
  e.reference.K = [](double, double) { return 1.0; };
  e.reference.H = [](double, double) { return 1.0; };
  e.default_domain = {-1.0, 1.0, -1.0, 1.0};
  e.kind = Kind::degenerate;
  e.notes = "constant mean curvature H = 1 with H^2 - K = 0: not of general type, no canonical coordinates";
  return e;
}

CorpusEntry cylinder() {
  CorpusEntry e;
  e.name = "cylinder";
  e.parametrization = "x = (u - v, cos(u + v), sin(u + v))";
  e.position = [](double u, double v) { return MinkowskiVec{u - v, std::cos(u + v), std::sin(u + v)}; };
  e.provider.domain = kWide;
  e.provider.jet = [pos = e.position](double u, double v) {
    const double c = std::cos(u + v), s = std::sin(u + v);
    const MinkowskiVec second{0, -c, -s};
    return SurfaceJet2{pos(u, v), {1, -s, c}, {-1, -s, c}, second, second, second};
  };
  e.reference.F = [](double, double) { return 2.0; };
  e.reference.L = [](double, double) { return 1.0; };
  e.reference.M = [](double, double) { return 1.0; };
  e.reference.N = [](double, double) { return 1.0; };
  e.reference.K = [](double, double) { return 0.0; };
  e.reference.H = [](double, double) { return 0.5; };
  e.default_domain = {0.0, 2 * std::numbers::pi, 0.0, 2 * std::numbers::pi};
  e.kind = Kind::first;
  e.notes = "constant mean curvature H = 1/2, K = 0, canonical with L = M = N = 1";
  return e;
}

CorpusEntry hyperbolic_cylinder() {
  CorpusEntry e;
  e.name = "hyperbolic_cylinder";
  e.parametrization = "x = (sinh(u - v), cosh(u - v), u + v)";
  e.position = [](double u, double v) { return MinkowskiVec{std::sinh(u - v), std::cosh(u - v), u + v}; };
  e.provider.domain = kWide;
  e.provider.jet = [pos = e.position](double u, double v) {
    const double sa = std::sinh(u - v), ca = std::cosh(u - v);
    const MinkowskiVec hyp{sa, ca, 0};
    return SurfaceJet2{pos(u, v), {ca, sa, 1}, {-ca, -sa, 1}, hyp, -hyp, hyp};
  };
  e.reference.F = [](double, double) { return 2.0; };
  e.reference.L = [](double, double) { return -1.0; };
  e.reference.M = [](double, double) { return 1.0; };
  e.reference.N = [](double, double) { return -1.0; };
  e.reference.K = [](double, double) { return 0.0; };
  e.reference.H = [](double, double) { return 0.5; };
  e.default_domain = {0.0, 2 * std::numbers::pi, 0.0, 2 * std::numbers::pi};
  e.kind = Kind::first;
  e.notes = "constant mean curvature H = 1/2, K = 0, canonical with L = N = -1, M = 1; pairs with cylinder";
  return e;
}

CorpusEntry hyperbolic_cone() {
  CorpusEntry e;
  e.name = "hyperbolic_cone";
  e.parametrization = "x = (e^((u+v)/2) sinh(u - v), sqrt(3) e^((u+v)/2), e^((u+v)/2) cosh(u - v))";
  e.position = [](double u, double v) {
    const double p = std::exp((u + v) / 2);
    return MinkowskiVec{p * std::sinh(u - v), sqrt3 * p, p * std::cosh(u - v)};
  };
  e.provider.domain = kWide;
  e.provider.jet = [pos = e.position](double u, double v) {
    const double p = std::exp((u + v) / 2);
    const double sa = std::sinh(u - v), ca = std::cosh(u - v);
    const MinkowskiVec radial{sa, sqrt3, ca};
    return from_ab(pos(u, v), p * MinkowskiVec{ca, 0, sa}, (p / 2) * radial, p * MinkowskiVec{sa, 0, ca},
                   (p / 2) * MinkowskiVec{ca, 0, sa}, (p / 4) * radial);
  };
  e.reference.F = [](double u, double v) { return 2.0 * std::exp(u + v); };
  e.reference.L = [](double u, double v) { return sqrt3 / 2 * std::exp((u + v) / 2); };
  e.reference.M = [](double u, double v) { return -sqrt3 / 2 * std::exp((u + v) / 2); };
  e.reference.N = [](double u, double v) { return sqrt3 / 2 * std::exp((u + v) / 2); };
  e.reference.K = [](double, double) { return 0.0; };
  e.reference.H = [](double u, double v) { return -sqrt3 / 4 * std::exp(-(u + v) / 2); };
  e.default_domain = {-1.0, 1.0, -1.0, 1.0};
  e.kind = Kind::first;
  e.notes = "non-constant mean curvature; isotropic but not canonical coordinates";
  CanonicalReference c;
  c.tilde_u0 = c.tilde_v0 = 2 * std::numbers::sqrt2 * std::pow(3.0, 0.25);
  c.F = [](double tu, double tv) { return tu * tu * tu * tv * tv * tv / 1152.0; };
  c.H = [](double tu, double tv) { return -48.0 * sqrt3 / (tu * tu * tv * tv); };
  e.canonical = c;
  return e;
}

const std::vector<CorpusEntry>& registry() {
  static const std::vector<CorpusEntry> entries{enneper(false), enneper(true),        lorentz_sphere(),
                                                cylinder(),     hyperbolic_cylinder(), hyperbolic_cone()};
  return entries;
}

int sign_or_one(double x) { return x < 0.0 ? -1 : 1; }

}  // namespace

const char* to_string(Kind k) {
  switch (k) {
    case Kind::first:
      return "first";
    case Kind::second:
      return "second";
    case Kind::degenerate:
      return "degenerate";
  }
  return "unknown";
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> out = [] {
    std::vector<std::string> n;
    for (const auto& e : registry()) n.push_back(e.name);
    return n;
  }();
  return out;
}

const CorpusEntry& get(std::string_view name) {
  for (const auto& e : registry())
    if (e.name == name) return e;
  throw LookupError("unknown corpus surface '" + std::string(name) + "'");
}

Chart reference_chart(std::string_view name, const std::vector<double>& u_grid, const std::vector<double>& v_grid,
                      double u0, double v0) {
  const CorpusEntry& e = get(name);
  Chart c;
  c.grid = {u_grid, v_grid};
  c.grid.validate();
  std::string hits;
  std::size_t count = 0;
  for (std::size_t j = 0; j < c.grid.nv(); ++j)
    for (std::size_t i = 0; i < c.grid.nu(); ++i)
      if (e.provider.is_singular(c.grid.u[i], c.grid.v[j])) {
        if (count < 8) hits += " (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
        ++count;
      }
  if (count > 0)
    throw DomainError("grid touches the singular set of " + e.name + " at " + std::to_string(count) + " node(s):" + hits);
  c.u0_index = node_index(c.grid.u, u0, "u0");
  c.v0_index = node_index(c.grid.v, v0, "v0");
  c.F = sample(c.grid, e.reference.F);
  c.H = sample(c.grid, e.reference.H);
  c.L = sample(c.grid, e.reference.L);
  c.M = sample(c.grid, e.reference.M);
  c.N = sample(c.grid, e.reference.N);
  c.K = sample(c.grid, e.reference.K);
  const double l0 = e.reference.L(c.u0(), c.v0());
  const double n0 = e.reference.N(c.u0(), c.v0());
  c.eps1 = sign_or_one(l0);
  c.eps2 = sign_or_one(n0);
  if (l0 == 0.0 || n0 == 0.0) c.metadata["degenerate"] = "L or N vanishes at the initial point";
  c.metadata["source"] = e.name;
  return c;
}

}  // namespace lsl::corpus
