#include <doctest.h>

#include <cmath>

#include "lsl/bonnet.hpp"
#include "lsl/corpus.hpp"
#include "lsl/errors.hpp"
#include "lsl/natural_equation.hpp"
#include "lsl/surface.hpp"

using namespace lsl;

namespace {

Chart fh_chart(const char* name, const std::vector<double>& u, const std::vector<double>& v, double u0, double v0) {
  Chart c = corpus::reference_chart(name, u, v, u0, v0);
  c.L.reset();
  c.M.reset();
  c.N.reset();
  c.K.reset();
  return c;
}

MeshField corpus_mesh(const char* name, const Grid2D& g) {
  const auto& e = corpus::get(name);
  MeshField m(g);
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) m(i, j) = e.position(g.u[i], g.v[j]);
  return m;
}

struct Ranges {
  double F, L, M, N, H;  // max deviation from the expected constants
};

Ranges form_deviation(const ReconstructionResult& r, double F, double L, double M, double N, double H) {
  Ranges d{0, 0, 0, 0, 0};
  const auto forms = analyze_mesh(r.grid, r.mesh);
  for (const auto& f : forms.values()) {
    d.F = std::max(d.F, std::abs(f.F - F));
    d.L = std::max(d.L, std::abs(f.L - L));
    d.M = std::max(d.M, std::abs(f.M - M));
    d.N = std::max(d.N, std::abs(f.N - N));
    d.H = std::max(d.H, std::abs(f.H - H));
  }
  return d;
}

/// Boost with rapidity phi in the (x1, x2) plane; preserves the metric and orientation.
MinkowskiVec boost(const MinkowskiVec& a, double phi) {
  const double c = std::cosh(phi), s = std::sinh(phi);
  return {c * a.a1 + s * a.a2, s * a.a1 + c * a.a2, a.a3};
}

}  // namespace

TEST_CASE("initial frame") {
  const auto f2 = initial_frame(2.0);
  CHECK(f2.Y == MinkowskiVec{-1, 1, 0});
  CHECK(inner(f2.X, f2.Y) == 2.0);
  CHECK(inner(f2.X, f2.X) == 0.0);
  CHECK(inner(f2.l, f2.l) == 1.0);
  CHECK(det(f2.X, f2.Y, f2.l) == 2.0);
  CHECK(frame_defect(f2, 2.0) == 0.0);
  const auto fh = initial_frame(0.5);
  CHECK(fh.Y == MinkowskiVec{-0.25, 0.25, 0});
  FrameState bad = f2;
  bad.X = {1, 0, 0};
  CHECK_THROWS_AS(initial_frame(2.0, bad), InvalidFrameError);
  FrameState flipped = f2;
  flipped.l = -f2.l;
  CHECK_THROWS_AS(initial_frame(2.0, flipped), InvalidFrameError);
  CHECK_THROWS_AS(initial_frame(-1.0), InvalidFrameError);
  FrameState boosted{boost(f2.X, 0.3), boost(f2.Y, 0.3), boost(f2.l, 0.3), {1, 2, 3}};
  CHECK_NOTHROW(initial_frame(2.0, boosted));
}

TEST_CASE("cylinder and hyperbolic cylinder are recovered") {
  const auto g = linspace(0, 2 * std::acos(-1.0), 61);
  const auto r = reconstruct(fh_chart("cylinder", g, g, g[30], g[30]));
  const auto d = form_deviation(r, 2, 1, 1, 1, 0.5);
  CHECK(d.F < 1e-4);
  CHECK(d.L < 2e-4);
  CHECK(d.M < 1e-4);
  CHECK(d.N < 2e-4);
  CHECK_FALSE(r.natural_warning);
  CHECK(congruence_check(r.mesh, corpus_mesh("cylinder", r.grid), r.grid, 1e-3).verdict == Congruence::congruent);

  const auto h = reconstruct(fh_chart("hyperbolic_cylinder", g, g, g[30], g[30]));
  const auto dh = form_deviation(h, 2, -1, 1, -1, 0.5);
  CHECK(dh.L < 2e-4);
  CHECK(dh.M < 1e-4);
  CHECK(dh.N < 2e-4);
}

TEST_CASE("Enneper-type round trip and RK4 drift order") {
  double prev_drift = 0;
  for (std::size_t n : {51, 101}) {
    const Grid2D g{linspace(1, 2, n), linspace(-1, 0, n)};
    const auto r = reconstruct(fh_chart("enneper1", g.u, g.v, 1.5, -0.5));
    CHECK(r.form_mismatch.evaluated);
    CHECK(r.form_mismatch.F_max < 1e-6);
    CHECK(r.form_mismatch.H_max < 1e-6);
    CHECK(r.transposed_gap.has_value());
    CHECK(*r.transposed_gap < 1e-6);
    const auto forms = analyze_mesh(g, r.mesh);
    for (const auto& f : forms.values()) {
      CHECK(std::abs(f.E) < 1e-6);
      CHECK(std::abs(f.G) < 1e-6);
    }
    if (prev_drift > 0) CHECK(prev_drift / r.drift_max >= 12.0);
    prev_drift = r.drift_max;
    if (n == 101)
      CHECK(congruence_check(r.mesh, corpus_mesh("enneper1", g), g, 1e-4).verdict == Congruence::congruent);
  }
}

TEST_CASE("compatibility residual separates consistent from inconsistent data") {
  const auto g = linspace(0, 6, 41), g2 = linspace(0, 6, 81);
  const auto ok = reconstruct(fh_chart("cylinder", g, g, 3, 3));
  const auto ok2 = reconstruct(fh_chart("cylinder", g2, g2, 3, 3));
  CHECK(ok.compat_max < 1e-4);
  CHECK(std::log2(ok.compat_max / ok2.compat_max) >= 1.9);
  Chart bad = fh_chart("cylinder", g, g, 3, 3);
  for (double& F : bad.F.values()) F *= 1.05;
  const auto r = reconstruct(bad);
  CHECK(r.natural_warning);
  CHECK(r.compat_max > 1e-2);
  CHECK(std::isnan(r.compat_residual(0, 0)));
}

TEST_CASE("reconstruction aborts on non-positive F") {
  const auto g = linspace(0, 1, 11);
  Chart c = fh_chart("cylinder", g, g, 0.5, 0.5);
  c.F(7, 3) = -1.0;
  CHECK_THROWS_AS(reconstruct(c), ReconstructionAbort);
  try {
    reconstruct(c);
  } catch (const ReconstructionAbort& e) {
    CHECK(std::string(e.what()).find("i=7, j=3") != std::string::npos);
  }
}

TEST_CASE("seed equivariance") {
  const Grid2D g{linspace(1, 2, 41), linspace(-1, 0, 41)};
  const Chart c = fh_chart("enneper1", g.u, g.v, 1.5, -0.5);
  const double F0 = c.F(c.u0_index, c.v0_index);
  const auto s = initial_frame(F0);
  const FrameState moved{boost(s.X, -0.7), boost(s.Y, -0.7), boost(s.l, -0.7), {3, -1, 2}};
  const auto a = reconstruct(c);
  const auto b = reconstruct(c, moved);
  CHECK(congruence_check(a.mesh, b.mesh, g).verdict == Congruence::congruent);
  double gap = 0;
  for (std::size_t k = 0; k < g.size(); ++k)
    gap = std::max(gap, euclidean_norm(boost(a.mesh.values()[k], -0.7) + MinkowskiVec{3, -1, 2} - b.mesh.values()[k]));
  CHECK(gap < 1e-9);
}

TEST_CASE("the constant mean curvature pair") {
  const auto gl = linspace(0, 2 * std::acos(-1.0), 61);
  const Grid2D g{gl, gl};
  SUBCASE("H = 1/2") {
    const auto [p, m] = cmc_pair(Field2D(g, 0.0), 0.5, g, 30, 30);
    CHECK(p.chart.eps1 == 1);
    CHECK(m.chart.eps1 == -1);
    const auto dp = form_deviation(p, 2, 1, 1, 1, 0.5);
    const auto dm = form_deviation(m, 2, -1, 1, -1, 0.5);
    CHECK(std::max({dp.L, dp.M, dp.N}) < 2e-4);
    CHECK(std::max({dm.L, dm.M, dm.N}) < 2e-4);
    const auto c = congruence_check(p.mesh, m.mesh, g, 1e-3);
    CHECK(c.verdict == Congruence::not_congruent);
    CHECK(c.L_mismatch == doctest::Approx(2.0).epsilon(1e-3));
  }
  SUBCASE("H = -1/2") {
    const auto [p, m] = cmc_pair(Field2D(g, 0.0), -0.5, g, 30, 30);
    const auto dp = form_deviation(p, 2, 1, -1, 1, -0.5);
    const auto dm = form_deviation(m, 2, -1, -1, -1, -0.5);
    CHECK(std::max({dp.L, dp.M, dp.N, dp.H}) < 2e-4);
    CHECK(std::max({dm.L, dm.M, dm.N, dm.H}) < 2e-4);
  }
  SUBCASE("degenerate and minimal data are refused") {
    CHECK_THROWS_AS(cmc_pair(Field2D(g, 1.0), 1.0, g, 0, 0), DegeneracyError);
    CHECK_THROWS_AS(cmc_pair(Field2D(g, -1.0), 0.0, g, 0, 0), PreconditionError);
  }
}

TEST_CASE("minimal surfaces from K") {
  SUBCASE("Enneper-type 1") {
    const Grid2D g{linspace(1, 2, 61), linspace(-1, 0, 61)};
    const auto r = minimal_from_K(sample(g, corpus::get("enneper1").reference.K), g, 30, 30);
    CHECK(r.chart.eps1 == 1);
    CHECK(r.chart.eps2 == 1);
    CHECK(congruence_check(r.mesh, corpus_mesh("enneper1", g), g, 1e-4).verdict == Congruence::congruent);
  }
  SUBCASE("Enneper-type 2") {
    const Grid2D g{linspace(1, 2, 61), linspace(1, 2, 61)};
    const auto r = minimal_from_K(sample(g, corpus::get("enneper2").reference.K), g, 30, 30);
    CHECK(r.chart.eps2 == -1);
    CHECK(congruence_check(r.mesh, corpus_mesh("enneper2", g), g, 1e-4).verdict == Congruence::congruent);
  }
  SUBCASE("K = -1 does not satisfy the minimal equation") {
    const Grid2D g{linspace(0, 1, 21), linspace(0, 1, 21)};
    CHECK_THROWS_AS(minimal_from_K(Field2D(g, -1.0), g, 10, 10), PreconditionError);
    const auto r = minimal_from_K(Field2D(g, -1.0), g, 10, 10, std::nullopt, true);
    CHECK(r.natural_warning);
  }
}

TEST_CASE("congruence check") {
  const Grid2D g{linspace(1, 2, 31), linspace(-1, 0, 31)};
  const MeshField a = corpus_mesh("enneper1", g);
  MeshField b(g);
  for (std::size_t k = 0; k < g.size(); ++k) b.values()[k] = boost(a.values()[k], 0.4) + MinkowskiVec{1, 2, 3};
  CHECK(congruence_check(a, b, g).verdict == Congruence::congruent);
  MeshField mirrored(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto& p = a.values()[k];
    mirrored.values()[k] = {p.a1, p.a2, -p.a3};
  }
  CHECK(congruence_check(a, mirrored, g).verdict == Congruence::non_proper);
  const auto gl = linspace(0, 2, 31);
  const Grid2D gc{gl, gl};
  CHECK(congruence_check(corpus_mesh("cylinder", gc), corpus_mesh("hyperbolic_cylinder", gc), gc).verdict ==
        Congruence::not_congruent);
  CHECK(std::string(to_string(Congruence::non_proper)) == "non_proper");
}
