#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lsl/bonnet.hpp"
#include "lsl/canonicalize.hpp"
#include "lsl/corpus.hpp"
#include "lsl/errors.hpp"
#include "lsl/io.hpp"
#include "lsl/natural_equation.hpp"
#include "lsl/surface.hpp"

namespace fs = std::filesystem;
using namespace lsl;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInput = 2;

/// Raised for failures that should produce exit code 1 after the report
/// has been written.
struct CheckAbort {
  std::string message;
};

// ---- argument parsing helpers ----

struct GridSize {
  std::size_t nu = 0, nv = 0;
};

GridSize parse_grid(const std::string& text) {
  std::string s = text;
  const std::string times = "\xC3\x97";  // U+00D7
  if (auto p = s.find(times); p != std::string::npos) s.replace(p, times.size(), "x");
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw FormatError("--grid expects NUxNV, got '" + text + "'");
  try {
    GridSize g{std::stoul(s.substr(0, x)), std::stoul(s.substr(x + 1))};
    if (g.nu < 2 || g.nv < 2) throw FormatError("--grid needs at least 2 nodes per axis");
    return g;
  } catch (const std::logic_error&) {
    throw FormatError("--grid expects NUxNV, got '" + text + "'");
  }
}

Rectangle parse_domain(const std::string& text) {
  double a = 0, b = 0, c = 0, d = 0;
  char s1 = 0, s2 = 0, s3 = 0;
  std::istringstream in(text);
  in >> a >> s1 >> b >> s2 >> c >> s3 >> d;
  if (!in || s1 != ':' || s2 != ',' || s3 != ':' || !(b > a) || !(d > c))
    throw FormatError("--domain expects umin:umax,vmin:vmax with umin < umax and vmin < vmax, got '" + text + "'");
  return {a, b, c, d};
}

bool is_corpus_name(const std::string& s) {
  const auto& n = corpus::names();
  return std::find(n.begin(), n.end(), s) != n.end();
}

double max_abs(std::span<const double> xs) {
  double m = 0;
  for (double x : xs)
    if (std::isfinite(x)) m = std::max(m, std::abs(x));
  return m;
}

io::Json range_json(std::span<const double> xs) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double x : xs)
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  if (lo > hi) return nullptr;
  return io::Json::array({lo, hi});
}

std::string fmt_double(double x) { return fmt::format("{}", x); }

/// Options shared by the commands that sample a corpus surface.
struct SamplingOptions {
  std::optional<std::string> grid;
  std::optional<std::string> domain;
  std::optional<double> u0, v0;
};

void add_sampling_options(CLI::App* app, SamplingOptions& o) {
  app->add_option("--grid", o.grid, "Sampling grid NUxNV for corpus sources");
  app->add_option("--domain", o.domain, "Parameter rectangle umin:umax,vmin:vmax");
  app->add_option("--u0", o.u0, "Initial point u0 (made a grid node)");
  app->add_option("--v0", o.v0, "Initial point v0 (made a grid node)");
}

/// Grid over a rectangle with (u0, v0) as a node; the default initial point
/// is the middle node.
struct Sampling {
  Grid2D grid;
  Rectangle domain;
  double u0 = 0, v0 = 0;
};

Sampling make_sampling(const corpus::CorpusEntry& e, const SamplingOptions& o, GridSize fallback) {
  Sampling s;
  s.domain = o.domain ? parse_domain(*o.domain) : e.default_domain;
  const GridSize g = o.grid ? parse_grid(*o.grid) : fallback;
  s.u0 = o.u0.value_or(linspace(s.domain.u_min, s.domain.u_max, g.nu)[(g.nu - 1) / 2]);
  s.v0 = o.v0.value_or(linspace(s.domain.v_min, s.domain.v_max, g.nv)[(g.nv - 1) / 2]);
  if (!s.domain.contains(s.u0, s.v0))
    throw PreconditionError(fmt::format("initial point ({}, {}) lies outside the domain", s.u0, s.v0));
  s.grid = {anchored_grid(s.domain.u_min, s.domain.u_max, g.nu, s.u0),
            anchored_grid(s.domain.v_min, s.domain.v_max, g.nv, s.v0)};
  return s;
}

std::string sampling_digest(const std::string& name, const Sampling& s) {
  return io::digest(fmt::format("{}|{}:{},{}:{}|{}x{}|{},{}", name, s.domain.u_min, s.domain.u_max, s.domain.v_min,
                                s.domain.v_max, s.grid.nu(), s.grid.nv(), s.u0, s.v0));
}

/// Chart with every field taken from analytic jets.
Chart chart_from_analysis(const GridAnalysis& ga, const Grid2D& grid, double u0, double v0) {
  if (ga.excluded > 0) throw DomainError(fmt::format("{} grid nodes lie on the singular set", ga.excluded));
  Chart c;
  c.grid = grid;
  c.F = Field2D(grid);
  c.H = Field2D(grid);
  Field2D L(grid), M(grid), N(grid), K(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto& f = ga.forms.values()[k];
    c.F.values()[k] = f.F;
    c.H.values()[k] = f.H;
    L.values()[k] = f.L;
    M.values()[k] = f.M;
    N.values()[k] = f.N;
    K.values()[k] = f.K;
  }
  c.u0_index = node_index(grid.u, u0, "u0");
  c.v0_index = node_index(grid.v, v0, "v0");
  const double Lb = L(c.u0_index, c.v0_index), Nb = N(c.u0_index, c.v0_index);
  c.eps1 = Lb < 0 ? -1 : 1;
  c.eps2 = Nb < 0 ? -1 : 1;
  c.L = std::move(L);
  c.M = std::move(M);
  c.N = std::move(N);
  c.K = std::move(K);
  return c;
}

/// Four-point cross difference of g on interior nodes; NaN elsewhere.
Field2D cross_difference(const Grid2D& grid, const Field2D& g) {
  Field2D out(grid, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 1; j + 1 < grid.nv(); ++j)
    for (std::size_t i = 1; i + 1 < grid.nu(); ++i) {
      const double du = grid.u[i + 1] - grid.u[i - 1], dv = grid.v[j + 1] - grid.v[j - 1];
      out(i, j) = (g(i + 1, j + 1) - g(i + 1, j - 1) - g(i - 1, j + 1) + g(i - 1, j - 1)) / (du * dv);
    }
  return out;
}

/// K + (ln F)_uv / F on interior nodes.
io::Check egregium_check(const Grid2D& grid, const Field2D& F, const Field2D& K, double tol) {
  Field2D lnF(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) lnF.values()[k] = std::log(F.values()[k]);
  const Field2D d = cross_difference(grid, lnF);
  double m = 0, s = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double r = K.values()[k] + d.values()[k] / F.values()[k];
    if (!std::isfinite(r)) continue;
    m = std::max(m, std::abs(r));
    s += r * r;
    ++n;
  }
  return {"theorema_egregium", m, tol, n ? std::sqrt(s / static_cast<double>(n)) : 0.0, std::nullopt};
}

io::Json classification_summary(const Chart& c, const std::optional<Field2D>& h2k) {
  io::Json out;
  if (!h2k) {
    out["status"] = "unavailable";
    return out;
  }
  std::size_t first = 0, second = 0, none = 0;
  SurfaceKind base = SurfaceKind::not_general_type;
  for (std::size_t j = 0; j < c.grid.nv(); ++j)
    for (std::size_t i = 0; i < c.grid.nu(); ++i) {
      const double H = c.H(i, j), d = (*h2k)(i, j), K = H * H - d;
      const double tol = 1e-8 * (1 + H * H + std::abs(K));
      const auto kind = d > tol    ? SurfaceKind::general_first_kind
                        : d < -tol ? SurfaceKind::general_second_kind
                                   : SurfaceKind::not_general_type;
      (kind == SurfaceKind::general_first_kind ? first : kind == SurfaceKind::general_second_kind ? second : none)++;
      if (i == c.u0_index && j == c.v0_index) base = kind;
    }
  out["at_initial_point"] = to_string(base);
  out["nodes_first_kind"] = first;
  out["nodes_second_kind"] = second;
  out["nodes_not_general_type"] = none;
  out["kind"] = first == c.grid.size() ? "first" : second == c.grid.size() ? "second" : none == c.grid.size() ? "not_general_type" : "mixed";
  return out;
}

io::Json canonical_summary(const Chart& c, double tol) {
  io::Json out;
  if (!c.L || !c.N) {
    out["status"] = "unavailable";
    out["reason"] = "chart carries no L, N fields";
    return out;
  }
  double minL = std::numeric_limits<double>::infinity(), minN = minL;
  for (std::size_t i = 0; i < c.grid.nu(); ++i) minL = std::min(minL, std::abs((*c.L)(i, c.v0_index)));
  for (std::size_t j = 0; j < c.grid.nv(); ++j) minN = std::min(minN, std::abs((*c.N)(c.u0_index, j)));
  if (minL <= 1e-8 || minN <= 1e-8) {
    out["status"] = "unavailable";
    out["reason"] = "not of general type along a base line (L or N vanishes)";
    return out;
  }
  const auto r = verify_canonical(c, tol);
  out["status"] = r.pass ? "pass" : "fail";
  out["max_dev_L"] = r.max_dev_L;
  out["max_dev_N"] = r.max_dev_N;
  out["eps1"] = r.eps1;
  out["eps2"] = r.eps2;
  out["u0"] = r.u0;
  out["v0"] = r.v0;
  out["tolerance"] = tol;
  return out;
}

// ---- analyze ----

struct AnalyzeArgs {
  std::string source;
  std::string report;
  std::optional<std::string> mesh;
  SamplingOptions sampling;
  double tol_reference = 1e-9;
  double tol_identity = 1e-9;
  double tol_egregium = 1e-2;
  double tol_canonical = 1e-6;
};

int cmd_analyze(const AnalyzeArgs& a, io::Report& rep) {
  rep.set_tolerance("reference", a.tol_reference);
  rep.set_tolerance("identity", a.tol_identity);
  rep.set_tolerance("egregium", a.tol_egregium);
  rep.set_tolerance("canonical", a.tol_canonical);
  auto& sum = rep.summary();
  sum["source"] = a.source;

  Chart chart;
  if (is_corpus_name(a.source)) {
    const auto& e = corpus::get(a.source);
    Sampling s = make_sampling(e, a.sampling, {41, 41});
    rep.set_inputs_digest(sampling_digest(e.name, s));
    SurfaceProvider provider = e.provider;
    auto position = e.position;
    bool renumbered = false;
    if (fundamental_forms(provider(s.u0, s.v0)).F < 0) {
      provider = swap_parameters(provider);
      position = [p = e.position](double u, double v) { return p(v, u); };
      std::swap(s.grid.u, s.grid.v);
      std::swap(s.u0, s.v0);
      std::swap(s.domain.u_min, s.domain.v_min);
      std::swap(s.domain.u_max, s.domain.v_max);
      renumbered = true;
    }
    sum["renumbered"] = renumbered;
    sum["grid"] = {s.grid.nu(), s.grid.nv()};
    sum["domain"] = {s.domain.u_min, s.domain.u_max, s.domain.v_min, s.domain.v_max};
    const GridAnalysis ga = analyze_grid(provider, s.grid);
    sum["excluded_nodes"] = ga.excluded;
    chart = chart_from_analysis(ga, s.grid, s.u0, s.v0);

    double iso = 0, unit = 0, ident = 0, ref = 0, scale = 0;
    for (std::size_t j = 0; j < s.grid.nv(); ++j)
      for (std::size_t i = 0; i < s.grid.nu(); ++i) {
        const auto& f = ga.forms(i, j);
        const double u = s.grid.u[i], v = s.grid.v[j];
        scale = std::max(scale, std::abs(f.F));
        iso = std::max({iso, std::abs(f.E), std::abs(f.G)});
        unit = std::max(unit, std::abs(inner(f.l, f.l) - 1));
        ident = std::max(ident, std::abs((f.H * f.H - f.K) - f.L * f.N / (f.F * f.F)) / (1 + f.H * f.H + std::abs(f.K)));
        if (!renumbered) {
          const auto& r = e.reference;
          const double pairs[][2] = {{f.F, r.F(u, v)}, {f.L, r.L(u, v)}, {f.M, r.M(u, v)},
                                     {f.N, r.N(u, v)}, {f.K, r.K(u, v)}, {f.H, r.H(u, v)}};
          for (const auto& p : pairs) ref = std::max(ref, std::abs(p[0] - p[1]) / (1 + std::abs(p[1])));
        }
      }
    rep.add_check({"isotropic", iso, 1e-8 * (1 + scale), std::nullopt, std::nullopt});
    rep.add_check({"unit_normal", unit, a.tol_identity, std::nullopt, std::nullopt});
    rep.add_check({"identity_H2K_LN_F2", ident, a.tol_identity, std::nullopt, std::nullopt});
    if (!renumbered) rep.add_check({"reference_match", ref, a.tol_reference, std::nullopt, std::nullopt});

    const auto pr = pseudo_arc_check(provider, s.u0, s.v0, s.grid.u, s.grid.v, a.tol_canonical);
    io::Json pa;
    pa["max_dev_u"] = pr.max_dev_u;
    pa["max_dev_v"] = pr.max_dev_v;
    pa["degenerate"] = pr.degenerate();
    pa["pass"] = pr.pass;
    sum["pseudo_arc_length"] = pa;

    if (a.mesh) {
      MeshField mesh(s.grid);
      for (std::size_t j = 0; j < s.grid.nv(); ++j)
        for (std::size_t i = 0; i < s.grid.nu(); ++i) mesh(i, j) = position(s.grid.u[i], s.grid.v[j]);
      io::write_mesh(*a.mesh, s.grid, mesh);
    }
  } else {
    if (a.mesh) throw PreconditionError("--mesh needs a corpus source; use reconstruct for chart files");
    rep.set_inputs_digest(io::digest(io::read_file(a.source)));
    chart = io::read_chart(a.source);
    sum["grid"] = {chart.grid.nu(), chart.grid.nv()};
    sum["renumbered"] = false;
    if (chart.has_second_form()) {
      double hm = 0, km = 0;
      for (std::size_t k = 0; k < chart.grid.size(); ++k) {
        const double F = chart.F.values()[k], L = chart.L->values()[k], M = chart.M->values()[k],
                     N = chart.N->values()[k], H = chart.H.values()[k];
        hm = std::max(hm, std::abs(H - M / F) / (1 + std::abs(H)));
        if (chart.K) {
          const double K = chart.K->values()[k];
          km = std::max(km, std::abs(K - (M * M - L * N) / (F * F)) / (1 + std::abs(K)));
        }
      }
      rep.add_check({"H_equals_M_over_F", hm, a.tol_identity, std::nullopt, std::nullopt});
      if (chart.K) rep.add_check({"K_equals_M2_minus_LN_over_F2", km, a.tol_identity, std::nullopt, std::nullopt});
    }
  }

  std::optional<Field2D> h2k;
  if (chart.K) {
    h2k = Field2D(chart.grid);
    for (std::size_t k = 0; k < chart.grid.size(); ++k)
      h2k->values()[k] = chart.H.values()[k] * chart.H.values()[k] - chart.K->values()[k];
  } else if (chart.has_second_form()) {
    h2k = Field2D(chart.grid);
    for (std::size_t k = 0; k < chart.grid.size(); ++k) {
      const double F = chart.F.values()[k];
      h2k->values()[k] = chart.L->values()[k] * chart.N->values()[k] / (F * F);
    }
  }
  if (chart.K && chart.grid.nu() >= 3 && chart.grid.nv() >= 3) {
    const double tol = a.tol_egregium * (1 + max_abs(chart.K->values()));
    rep.add_check(egregium_check(chart.grid, chart.F, *chart.K, tol));
  }
  sum["initial_point"] = {chart.u0(), chart.v0()};
  sum["classification"] = classification_summary(chart, h2k);
  sum["F_range"] = range_json(chart.F.values());
  sum["H_range"] = range_json(chart.H.values());
  if (chart.K) sum["K_range"] = range_json(chart.K->values());
  sum["canonical"] = canonical_summary(chart, a.tol_canonical);
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

// ---- canonicalize ----

struct CanonicalizeArgs {
  std::string source;
  std::string out;
  std::string report;
  SamplingOptions sampling;
  double tilde_u0 = 0, tilde_v0 = 0;
  std::optional<std::string> canonical_grid;
  double tol_canonical = 1e-6;
  double tol_closed_form = 1e-6;
  double tol_general = 1e-8;
};

int cmd_canonicalize(const CanonicalizeArgs& a, io::Report& rep) {
  rep.set_tolerance("canonical", a.tol_canonical);
  rep.set_tolerance("closed_form", a.tol_closed_form);
  rep.set_tolerance("general_type", a.tol_general);
  auto& sum = rep.summary();
  sum["source"] = a.source;
  sum["tilde_origin"] = {a.tilde_u0, a.tilde_v0};

  Chart source;
  std::pair<MonotoneMap, MonotoneMap> maps;
  const corpus::CorpusEntry* entry = nullptr;
  bool renumbered = false;
  try {
    if (is_corpus_name(a.source)) {
      entry = &corpus::get(a.source);
      Sampling s = make_sampling(*entry, a.sampling, {201, 201});
      rep.set_inputs_digest(
          io::digest(fmt::format("{}|{},{}", sampling_digest(entry->name, s), a.tilde_u0, a.tilde_v0)));
      SurfaceProvider provider = entry->provider;
      if (fundamental_forms(provider(s.u0, s.v0)).F < 0) {
        provider = swap_parameters(provider);
        std::swap(s.grid.u, s.grid.v);
        std::swap(s.u0, s.v0);
        renumbered = true;
      }
      source = chart_from_analysis(analyze_grid(provider, s.grid), s.grid, s.u0, s.v0);
      source.metadata["source"] = entry->name;
      maps = canonical_maps(provider, s.u0, s.v0, s.grid.u, s.grid.v, a.tilde_u0, a.tilde_v0, a.tol_general);
    } else {
      const std::string bytes = io::read_file(a.source);
      rep.set_inputs_digest(io::digest(fmt::format("{}|{},{}", io::digest(bytes), a.tilde_u0, a.tilde_v0)));
      source = io::read_chart(a.source);
      if (!source.L || !source.N) throw PreconditionError("canonicalize needs a chart with L and N fields");
      maps = canonical_maps(source, a.tilde_u0, a.tilde_v0, a.tol_general);
    }
  } catch (const NotGeneralTypeError& e) {
    sum["error"] = e.what();
    rep.add_check({"general_type_on_base_lines", 1.0, 0.0, std::nullopt, std::nullopt});
    throw CheckAbort{e.what()};
  }
  sum["renumbered"] = renumbered;

  const GridSize cg = a.canonical_grid ? parse_grid(*a.canonical_grid) : GridSize{source.grid.nu(), source.grid.nv()};
  const auto cu = anchored_grid(maps.first.range_lo(), maps.first.range_hi(), cg.nu, a.tilde_u0);
  const auto cv = anchored_grid(maps.second.range_lo(), maps.second.range_hi(), cg.nv, a.tilde_v0);
  Chart out = resample_to_canonical(source, maps, cu, cv, a.tol_canonical);

  const auto vr = verify_canonical(out, a.tol_canonical);
  rep.add_check({"canonical_L_on_base_row", vr.max_dev_L, a.tol_canonical, std::nullopt, std::nullopt});
  rep.add_check({"canonical_N_on_base_column", vr.max_dev_N, a.tol_canonical, std::nullopt, std::nullopt});
  sum["eps"] = {out.eps1, out.eps2};
  sum["canonical_grid"] = {out.grid.nu(), out.grid.nv()};
  sum["canonical_range"] = {out.grid.u.front(), out.grid.u.back(), out.grid.v.front(), out.grid.v.back()};

  if (entry && entry->canonical && !renumbered) {
    const auto& ref = *entry->canonical;
    const auto near = [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1 + std::abs(y)); };
    if (near(source.u0(), ref.u0) && near(source.v0(), ref.v0) && near(a.tilde_u0, ref.tilde_u0) &&
        near(a.tilde_v0, ref.tilde_v0)) {
      double ef = 0, eh = 0;
      for (std::size_t j = 0; j < out.grid.nv(); ++j)
        for (std::size_t i = 0; i < out.grid.nu(); ++i) {
          const double u = out.grid.u[i], v = out.grid.v[j];
          ef = std::max(ef, std::abs(out.F(i, j) / ref.F(u, v) - 1));
          eh = std::max(eh, std::abs(out.H(i, j) / ref.H(u, v) - 1));
        }
      rep.add_check({"closed_form_F_relative", ef, a.tol_closed_form, std::nullopt, std::nullopt});
      rep.add_check({"closed_form_H_relative", eh, a.tol_closed_form, std::nullopt, std::nullopt});
    }
  }
  io::write_chart(a.out, out);
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

// ---- residual ----

struct ResidualArgs {
  std::string chart;
  std::string mode = "general";
  std::string report;
  std::optional<std::string> refined;
  std::optional<double> H;
  double tol_residual = 1e-3;
  double tol_order = 1.9;
};

double constant_H(const Chart& c, std::optional<double> given) {
  if (given) return *given;
  const auto hs = c.H.values();
  const auto [lo, hi] = std::minmax_element(hs.begin(), hs.end());
  if (*hi - *lo > 1e-12 * (1 + std::abs(*lo)))
    throw PreconditionError(fmt::format("H is not constant on the chart (range [{}, {}]); pass --H", *lo, *hi));
  return *lo;
}

ResidualReport residual_of(const Chart& c, const ResidualArgs& a) {
  if (a.mode == "general") return natural_residual(c);
  if (!c.K) throw PreconditionError("mode " + a.mode + " needs a K field in the chart");
  if (a.mode == "cmc") return cmc_residual(*c.K, constant_H(c, a.H), c.grid);
  if (a.mode == "minimal") return minimal_residual(*c.K, c.grid);
  throw PreconditionError("unknown residual mode '" + a.mode + "'");
}

int cmd_residual(const ResidualArgs& a, io::Report& rep) {
  rep.set_tolerance("residual", a.tol_residual);
  std::string digest_input = io::digest(io::read_file(a.chart)) + "|" + a.mode;
  if (a.refined) digest_input += "|" + io::digest(io::read_file(*a.refined));
  if (a.H) digest_input += "|" + fmt_double(*a.H);
  rep.set_inputs_digest(io::digest(digest_input));

  const Chart c = io::read_chart(a.chart);
  ResidualReport r = residual_of(c, a);
  auto& sum = rep.summary();
  sum["mode"] = a.mode;
  sum["grid"] = {c.grid.nu(), c.grid.nv()};
  sum["h"] = r.h;
  if (a.refined) {
    const Chart cf = io::read_chart(*a.refined);
    const ResidualReport rf = residual_of(cf, a);
    sum["refined_grid"] = {cf.grid.nu(), cf.grid.nv()};
    sum["refined_h"] = rf.h;
    sum["refined_max_abs"] = rf.max_abs;
    r.h_order_estimate = two_grid_order(r, rf);
  }
  rep.add_check({a.mode + "_residual", r.max_abs, a.tol_residual, r.l2, r.h_order_estimate});
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

// ---- reconstruct ----

struct ReconstructArgs {
  std::string chart;
  std::string mesh;
  std::string report;
  bool pair = false;
  std::string seed = "standard";
  std::optional<double> H;
  bool no_probe = false;
  double tol_drift = 1e-5;
  double tol_form = 1e-4;
};

io::Json recomputed_summary(const ReconstructionResult& r) {
  io::Json out;
  if (r.grid.nu() < 5 || r.grid.nv() < 5) return nullptr;
  const auto forms = analyze_mesh(r.grid, r.mesh);
  std::vector<double> F, L, M, N, H;
  for (const auto& f : forms.values()) {
    F.push_back(f.F);
    L.push_back(f.L);
    M.push_back(f.M);
    N.push_back(f.N);
    H.push_back(f.H);
  }
  out["F"] = range_json(F);
  out["L"] = range_json(L);
  out["M"] = range_json(M);
  out["N"] = range_json(N);
  out["H"] = range_json(H);
  return out;
}

void add_reconstruction(io::Report& rep, const std::string& prefix, const ReconstructionResult& r,
                        const ReconstructArgs& a) {
  const double scale = 1 + max_abs(r.chart.F.values());
  double finite = 0;
  for (const auto& p : r.mesh.values())
    if (!is_finite(p)) finite += 1;
  rep.add_check({prefix + "mesh_nonfinite_nodes", finite, 0.0, std::nullopt, std::nullopt});
  rep.add_check({prefix + "invariant_drift", r.drift_max, a.tol_drift * scale, std::nullopt, std::nullopt});
  io::Json s;
  s["eps"] = {r.chart.eps1, r.chart.eps2};
  s["compat_max"] = r.compat_max;
  s["drift_max"] = r.drift_max;
  s["natural_residual_max"] = r.natural_residual_max;
  s["natural_warn_threshold"] = r.natural_warn_threshold;
  s["natural_warning"] = r.natural_warning;
  s["transposed_gap"] = r.transposed_gap ? io::Json(*r.transposed_gap) : io::Json(nullptr);
  s["form_mismatch"] = {{"evaluated", r.form_mismatch.evaluated},
                        {"F_max", r.form_mismatch.F_max},
                        {"H_max", r.form_mismatch.H_max}};
  s["recomputed"] = recomputed_summary(r);
  if (r.form_mismatch.evaluated && !r.natural_warning) {
    const double hs = 1 + max_abs(r.chart.H.values());
    rep.add_check({prefix + "form_mismatch_F", r.form_mismatch.F_max, a.tol_form * scale, std::nullopt, std::nullopt});
    rep.add_check({prefix + "form_mismatch_H", r.form_mismatch.H_max, a.tol_form * hs, std::nullopt, std::nullopt});
  }
  rep.summary()[prefix.empty() ? "reconstruction" : prefix.substr(0, prefix.size() - 1)] = std::move(s);
}

int cmd_reconstruct(const ReconstructArgs& a, io::Report& rep) {
  rep.set_tolerance("drift_relative", a.tol_drift);
  rep.set_tolerance("form_relative", a.tol_form);
  std::string digest_input = io::digest(io::read_file(a.chart)) + "|" + a.seed + (a.pair ? "|pair" : "");
  std::optional<FrameState> seed;
  if (a.seed != "standard") {
    digest_input += "|" + io::digest(io::read_file(a.seed));
    seed = io::read_seed(a.seed);
  }
  if (a.H) digest_input += "|" + fmt_double(*a.H);
  rep.set_inputs_digest(io::digest(digest_input));

  const Chart c = io::read_chart(a.chart);
  auto& sum = rep.summary();
  sum["grid"] = {c.grid.nu(), c.grid.nv()};
  sum["initial_point"] = {c.u0(), c.v0()};
  sum["seed"] = a.seed == "standard" ? "standard" : "file";
  const auto abort = [&](const std::string& msg) {
    sum["error"] = msg;
    rep.add_check({"reconstruction_completed", 1.0, 0.0, std::nullopt, std::nullopt});
    throw CheckAbort{msg};
  };
  try {
    if (!a.pair) {
      const auto r = reconstruct(c, seed, {!a.no_probe, true});
      add_reconstruction(rep, "", r, a);
      io::write_mesh(a.mesh, r.grid, r.mesh);
    } else {
      const double H = constant_H(c, a.H);
      Field2D K(c.grid);
      if (c.K) {
        K = *c.K;
      } else {
        for (std::size_t k = 0; k < c.grid.size(); ++k) {
          const double F = c.F.values()[k];
          K.values()[k] = H * H - c.eps1 * c.eps2 / (F * F);
        }
      }
      auto [p, m] = cmc_pair(K, H, c.grid, c.u0_index, c.v0_index, seed);
      add_reconstruction(rep, "p.", p, a);
      add_reconstruction(rep, "m.", m, a);
      if (c.grid.nu() >= 5 && c.grid.nv() >= 5)
        sum["pair_congruence"] = to_string(congruence_check(p.mesh, m.mesh, c.grid).verdict);
      io::write_mesh(a.mesh + "_p", p.grid, p.mesh);
      io::write_mesh(a.mesh + "_m", m.grid, m.mesh);
    }
  } catch (const ReconstructionAbort& e) {
    abort(e.what());
  }
  return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

// ---- corpus ----

struct CorpusArgs {
  std::string name;
  std::string out;
  SamplingOptions sampling;
  double perturb_F = 1.0;
  bool fh_only = false;
};

int cmd_corpus_list() {
  for (const auto& n : corpus::names()) {
    const auto& e = corpus::get(n);
    fmt::print("{:<20} {:<11} {}\n", n, corpus::to_string(e.kind), e.parametrization);
  }
  return kExitOk;
}

int cmd_corpus_show(const std::string& name) {
  const auto& e = corpus::get(name);
  const auto& d = e.default_domain;
  fmt::print("name:           {}\n", e.name);
  fmt::print("kind:           {}\n", corpus::to_string(e.kind));
  fmt::print("parametrization: {}\n", e.parametrization);
  fmt::print("default domain: [{}, {}] x [{}, {}]\n", d.u_min, d.u_max, d.v_min, d.v_max);
  const double u = 0.5 * (d.u_min + d.u_max), v = 0.5 * (d.v_min + d.v_max);
  const auto& r = e.reference;
  fmt::print("at ({}, {}):  F={} L={} M={} N={} K={} H={}\n", u, v, r.F(u, v), r.L(u, v), r.M(u, v), r.N(u, v),
             r.K(u, v), r.H(u, v));
  if (!e.notes.empty()) fmt::print("notes:          {}\n", e.notes);
  return kExitOk;
}

int cmd_corpus_chart(const CorpusArgs& a) {
  const auto& e = corpus::get(a.name);
  const Sampling s = make_sampling(e, a.sampling, {41, 41});
  Chart c = corpus::reference_chart(e.name, s.grid.u, s.grid.v, s.u0, s.v0);
  if (a.perturb_F != 1.0) {
    if (!(a.perturb_F > 0)) throw PreconditionError("--perturb-F must be positive");
    for (auto& x : c.F.values()) x *= a.perturb_F;
    c.L.reset();
    c.M.reset();
    c.N.reset();
    c.K.reset();
    c.metadata["perturb_F"] = fmt_double(a.perturb_F);
  }
  if (a.fh_only) {
    c.L.reset();
    c.M.reset();
    c.N.reset();
  }
  io::write_chart(a.out, c);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lorentz surfaces in Minkowski 3-space: analysis, canonical coordinates, natural equation, reconstruction"};
  app.require_subcommand(1);
  bool timing = false;
  app.add_flag("--timing", timing, "Record wall time in reports (makes them non-reproducible)");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Fundamental forms, invariants and classification");
  analyze->add_option("source", an.source, "Corpus name or chart file")->required();
  analyze->add_option("--report", an.report, "Report path")->required();
  analyze->add_option("--mesh", an.mesh, "Mesh stem (writes .obj and .csv)");
  add_sampling_options(analyze, an.sampling);
  analyze->add_option("--tol-reference", an.tol_reference, "Closed-form match tolerance")->capture_default_str();
  analyze->add_option("--tol-identity", an.tol_identity, "Pointwise identity tolerance")->capture_default_str();
  analyze->add_option("--tol-egregium", an.tol_egregium, "Theorema egregium tolerance, times 1+max|K|")
      ->capture_default_str();
  analyze->add_option("--tol-canonical", an.tol_canonical, "Canonicity tolerance")->capture_default_str();

  CanonicalizeArgs ca;
  auto* canon = app.add_subcommand("canonicalize", "Resample to canonical coordinates");
  canon->add_option("source", ca.source, "Corpus name or chart file with L, N")->required();
  canon->add_option("--out", ca.out, "Canonical chart path")->required();
  canon->add_option("--report", ca.report, "Report path")->required();
  add_sampling_options(canon, ca.sampling);
  canon->add_option("--tilde-u0", ca.tilde_u0, "Canonical value at u0")->capture_default_str();
  canon->add_option("--tilde-v0", ca.tilde_v0, "Canonical value at v0")->capture_default_str();
  canon->add_option("--canonical-grid", ca.canonical_grid, "Canonical grid NUxNV (default: source size)");
  canon->add_option("--tol-canonical", ca.tol_canonical, "Canonicity tolerance")->capture_default_str();
  canon->add_option("--tol-closed-form", ca.tol_closed_form, "Relative tolerance against known closed forms")
      ->capture_default_str();
  canon->add_option("--tol-general", ca.tol_general, "Threshold for |L|, |N| on the base lines")
      ->capture_default_str();

  ResidualArgs ra;
  auto* resid = app.add_subcommand("residual", "Natural-equation residuals");
  resid->add_option("chart", ra.chart, "Chart file")->required();
  resid->add_option("--mode", ra.mode, "general | cmc | minimal")
      ->check(CLI::IsMember({"general", "cmc", "minimal"}))
      ->capture_default_str();
  resid->add_option("--report", ra.report, "Report path")->required();
  resid->add_option("--refined", ra.refined, "Chart on a refined grid for a two-grid order estimate");
  resid->add_option("--H", ra.H, "Constant mean curvature for mode cmc (default: the chart's constant H)");
  resid->add_option("--tol-residual", ra.tol_residual, "Residual tolerance")->capture_default_str();

  ReconstructArgs rc;
  auto* recon = app.add_subcommand("reconstruct", "Surface from (F, H, eps1, eps2)");
  recon->add_option("chart", rc.chart, "Chart file")->required();
  recon->add_option("--mesh", rc.mesh, "Mesh stem")->required();
  recon->add_option("--report", rc.report, "Report path")->required();
  recon->add_flag("--pair", rc.pair, "Both constant-mean-curvature surfaces (stems _p and _m)");
  recon->add_option("--seed", rc.seed, "standard or a seed file")->capture_default_str();
  recon->add_option("--H", rc.H, "Constant mean curvature for --pair");
  recon->add_flag("--no-probe", rc.no_probe, "Skip the transposed-order integrability probe");
  recon->add_option("--tol-drift", rc.tol_drift, "Frame drift tolerance, times 1+max F")->capture_default_str();
  recon->add_option("--tol-form", rc.tol_form, "Recomputed-form tolerance, times 1+max|field|")
      ->capture_default_str();

  CorpusArgs co;
  auto* corp = app.add_subcommand("corpus", "Built-in example surfaces");
  corp->require_subcommand(1);
  corp->add_subcommand("list", "List entries");
  std::string show_name;
  auto* show = corp->add_subcommand("show", "Describe one entry");
  show->add_option("name", show_name)->required();
  auto* cchart = corp->add_subcommand("chart", "Write the closed-form chart of an entry");
  cchart->add_option("name", co.name)->required();
  cchart->add_option("--out", co.out, "Chart path")->required();
  add_sampling_options(cchart, co.sampling);
  cchart->add_option("--perturb-F", co.perturb_F, "Multiply F by this factor (drops L, M, N, K)");
  cchart->add_flag("--fh-only", co.fh_only, "Omit L, M, N");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::optional<io::Report> rep;
  std::string report_path;
  const auto finish = [&](int code) {
    if (rep) {
      if (timing) rep->set_wall_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
      rep->summary()["exit_code"] = code;
      rep->write(report_path);
    }
    return code;
  };

  try {
    if (analyze->parsed()) {
      rep.emplace("analyze");
      report_path = an.report;
      return finish(cmd_analyze(an, *rep));
    }
    if (canon->parsed()) {
      rep.emplace("canonicalize");
      report_path = ca.report;
      return finish(cmd_canonicalize(ca, *rep));
    }
    if (resid->parsed()) {
      rep.emplace("residual");
      report_path = ra.report;
      return finish(cmd_residual(ra, *rep));
    }
    if (recon->parsed()) {
      rep.emplace("reconstruct");
      report_path = rc.report;
      return finish(cmd_reconstruct(rc, *rep));
    }
    if (corp->got_subcommand("list")) return cmd_corpus_list();
    if (show->parsed()) return cmd_corpus_show(show_name);
    if (cchart->parsed()) return cmd_corpus_chart(co);
  } catch (const CheckAbort& e) {
    fmt::print(stderr, "check failed: {}\n", e.message);
    return finish(kExitCheckFailed);
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
