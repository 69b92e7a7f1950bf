#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lsl/corpus.hpp"
#include "lsl/errors.hpp"
#include "lsl/surface.hpp"
#include "support.hpp"

using namespace lsl;

TEST_CASE("registry") {
  CHECK(corpus::names().size() == 6);
  CHECK(corpus::get("enneper1").reference.K(1, 0) == doctest::Approx(-4.0));
  CHECK(corpus::get("hyperbolic_cone").reference.H(0, 0) == doctest::Approx(-std::numbers::sqrt3 / 4));
  CHECK(corpus::get("lorentz_sphere").kind == corpus::Kind::degenerate);
  CHECK(corpus::get("enneper2").kind == corpus::Kind::second);
  CHECK_THROWS_AS(corpus::get("torus"), LookupError);
}

TEST_CASE("positions match the stated parametrizations") {
  const double u = 0.4, v = -0.3, a = u - v, b = u + v;
  const auto near = [](const MinkowskiVec& x, const MinkowskiVec& y) { return euclidean_norm(x - y) < 1e-14; };
  CHECK(near(corpus::get("cylinder").position(u, v), {a, std::cos(b), std::sin(b)}));
  CHECK(near(corpus::get("hyperbolic_cylinder").position(u, v), {std::sinh(a), std::cosh(a), b}));
  const double eb = std::exp(b / 2);
  CHECK(near(corpus::get("hyperbolic_cone").position(u, v),
             {eb * std::sinh(a), std::numbers::sqrt3 * eb, eb * std::cosh(a)}));
  CHECK(near(corpus::get("lorentz_sphere").position(u, v),
             {std::sinh(a) / std::cosh(b), std::cosh(a) / std::cosh(b), std::tanh(b)}));
  CHECK(near(corpus::get("enneper1").position(u, v),
             {(u * u * u - v * v * v + 3 * u - 3 * v) / 6, (-u * u * u + v * v * v + 3 * u - 3 * v) / 6,
              (3 * u * u - 3 * v * v) / 6}));
}

TEST_CASE("analytic jets agree with differentiated positions") {
  const Rectangle box{-5, 5, -5, 5};
  for (const auto& name : corpus::names()) {
    const auto& e = corpus::get(name);
    const auto fdp = jet_from_position(e.position, box, 1e-4);
    const auto& d = e.default_domain;
    const double u = 0.3 * d.u_min + 0.7 * d.u_max, v = 0.6 * d.v_min + 0.4 * d.v_max;
    const auto a = e.provider(u, v), f = fdp(u, v);
    const double s = 1 + euclidean_norm(a.x);
    CHECK(euclidean_norm(a.x_u - f.x_u) < 1e-6 * s);
    CHECK(euclidean_norm(a.x_v - f.x_v) < 1e-6 * s);
    CHECK(euclidean_norm(a.x_uu - f.x_uu) < 1e-5 * s);
    CHECK(euclidean_norm(a.x_uv - f.x_uv) < 1e-5 * s);
    CHECK(euclidean_norm(a.x_vv - f.x_vv) < 1e-5 * s);
  }
}

TEST_CASE("closed forms reproduced at random interior points") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> t(0, 1);
  for (const auto& name : corpus::names()) {
    const auto& e = corpus::get(name);
    const auto& d = e.default_domain;
    const auto& r = e.reference;
    for (int k = 0; k < 100; ++k) {
      const double u = d.u_min + t(rng) * (d.u_max - d.u_min), v = d.v_min + t(rng) * (d.v_max - d.v_min);
      const auto f = fundamental_forms(e.provider(u, v));
      CHECK(test::rel_err(f.E, 0) <= 1e-9);
      CHECK(test::rel_err(f.G, 0) <= 1e-9);
      CHECK(test::rel_err(f.F, r.F(u, v)) <= 1e-9);
      CHECK(test::rel_err(f.L, r.L(u, v)) <= 1e-9);
      CHECK(test::rel_err(f.M, r.M(u, v)) <= 1e-9);
      CHECK(test::rel_err(f.N, r.N(u, v)) <= 1e-9);
      CHECK(test::rel_err(f.K, r.K(u, v)) <= 1e-9);
      CHECK(test::rel_err(f.H, r.H(u, v)) <= 1e-9);
      CHECK(is_isotropic(f, 1e-9));
    }
  }
}

TEST_CASE("reference charts") {
  const auto u = linspace(1, 2, 11), v = linspace(-1, 0, 11);
  const Chart c = corpus::reference_chart("enneper1", u, v, 1.5, -0.5);
  for (std::size_t j = 0; j < v.size(); ++j)
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(c.F(i, j) == 0.5 * (u[i] - v[j]) * (u[i] - v[j]));
  CHECK(c.u0_index == 5);
  CHECK(c.v0_index == 5);
  CHECK(c.eps1 == 1);
  CHECK(c.eps2 == 1);
  CHECK(c.metadata.at("source") == "enneper1");

  const auto g = linspace(-3, 3, 7);
  const Chart cyl = corpus::reference_chart("cylinder", g, g, 0, 0);
  for (double F : cyl.F.values()) CHECK(F == 2.0);
  for (double H : cyl.H.values()) CHECK(H == 0.5);

  const Chart hc = corpus::reference_chart("hyperbolic_cylinder", g, g, 0, 0);
  CHECK(hc.eps1 == -1);
  CHECK(hc.eps2 == -1);
  const Chart e2 = corpus::reference_chart("enneper2", linspace(0.5, 1.5, 5), linspace(0.5, 1.5, 5), 1, 1);
  CHECK(e2.eps1 == 1);
  CHECK(e2.eps2 == -1);
  const Chart sph = corpus::reference_chart("lorentz_sphere", g, g, 0, 0);
  CHECK(sph.metadata.count("degenerate") == 1);

  const auto unit = linspace(0, 1, 5);
  CHECK_THROWS_AS(corpus::reference_chart("enneper1", unit, unit, 0, 0), DomainError);
  CHECK_THROWS_AS(corpus::reference_chart("enneper1", u, v, 1.55, -0.5), PreconditionError);
}

TEST_CASE("canonical cone reference") {
  const auto& c = *corpus::get("hyperbolic_cone").canonical;
  const double c0 = 2 * std::sqrt(2.0) * std::pow(3.0, 0.25);
  CHECK(c.tilde_u0 == doctest::Approx(c0));
  CHECK(c.F(2, 3) == doctest::Approx(8.0 * 27.0 / 1152));
  CHECK(c.H(2, 3) == doctest::Approx(-48 * std::numbers::sqrt3 / 36));
}
