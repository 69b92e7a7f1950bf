#include "lsl/bonnet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lsl/errors.hpp"
#include "lsl/interp.hpp"
#include "lsl/natural_equation.hpp"
#include "lsl/parallel.hpp"
#include "lsl/stencil.hpp"
#include "lsl/surface.hpp"

namespace lsl {

namespace {

enum class Dir { u, v };

FrameState operator+(const FrameState& a, const FrameState& b) { return {a.X + b.X, a.Y + b.Y, a.l + b.l, a.x + b.x}; }
FrameState operator*(double s, const FrameState& a) { return {s * a.X, s * a.Y, s * a.l, s * a.x}; }

bool finite(const FrameState& s) { return is_finite(s.X) && is_finite(s.Y) && is_finite(s.l) && is_finite(s.x); }

struct Coeffs {
  double F, dF, A, M;  // A is L on u-lines and N on v-lines
};

// Right-hand side of the Frenet-type system along one parameter line.
FrameState rhs(const FrameState& s, const Coeffs& c, Dir d) {
  const double g = c.dF / c.F;
  if (d == Dir::u)
    return {g * s.X + c.A * s.l, c.M * s.l, -(c.M / c.F) * s.X - (c.A / c.F) * s.Y, s.X};
  return {c.M * s.l, g * s.Y + c.A * s.l, -(c.A / c.F) * s.X - (c.M / c.F) * s.Y, s.Y};
}

struct Line {
  std::vector<double> axis, F, A, M;
};

std::string node_name(Dir d, std::size_t along, std::size_t fixed) {
  const std::size_t i = d == Dir::u ? along : fixed;
  const std::size_t j = d == Dir::u ? fixed : along;
  return "node (i=" + std::to_string(i) + ", j=" + std::to_string(j) + ")";
}

// RK4 along a line from `start` in both directions.
std::vector<FrameState> march(const Line& line, std::size_t start, const FrameState& s0, Dir d, std::size_t fixed) {
  const std::size_t n = line.axis.size();
  for (std::size_t k = 0; k < n; ++k)
    if (!(line.F[k] > 0.0))
      throw ReconstructionAbort("F <= 0 at " + node_name(d, k, fixed) + ": F = " + std::to_string(line.F[k]));
  std::vector<FrameState> out(n);
  out[start] = s0;
  auto step = [&](std::size_t from, std::size_t to) {
    const std::size_t piece = std::min(from, to);
    const LocalCubic F(line.axis, line.F, piece), A(line.axis, line.A, piece), M(line.axis, line.M, piece);
    auto coeffs = [&](double t) { return Coeffs{F.value(t), F.derivative(t), A.value(t), M.value(t)}; };
    const double t0 = line.axis[from];
    const double h = line.axis[to] - t0;
    const FrameState& s = out[from];
    const Coeffs c0 = coeffs(t0), cm = coeffs(t0 + 0.5 * h), c1 = coeffs(t0 + h);
    if (!(cm.F > 0.0)) throw ReconstructionAbort("interpolated F <= 0 next to " + node_name(d, from, fixed));
    const FrameState k1 = rhs(s, c0, d);
    const FrameState k2 = rhs(s + (0.5 * h) * k1, cm, d);
    const FrameState k3 = rhs(s + (0.5 * h) * k2, cm, d);
    const FrameState k4 = rhs(s + h * k3, c1, d);
    out[to] = s + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!finite(out[to])) throw ReconstructionAbort("non-finite frame at " + node_name(d, to, fixed));
  };
  for (std::size_t k = start; k + 1 < n; ++k) step(k, k + 1);
  for (std::size_t k = start; k > 0; --k) step(k, k - 1);
  return out;
}

Line row(const Chart& c, std::size_t j) {
  Line l{c.grid.u, std::vector<double>(c.grid.nu()), std::vector<double>(c.grid.nu()), std::vector<double>(c.grid.nu())};
  for (std::size_t i = 0; i < c.grid.nu(); ++i) {
    l.F[i] = c.F(i, j);
    l.A[i] = (*c.L)(i, j);
    l.M[i] = (*c.M)(i, j);
  }
  return l;
}

Line column(const Chart& c, std::size_t i) {
  Line l{c.grid.v, std::vector<double>(c.grid.nv()), std::vector<double>(c.grid.nv()), std::vector<double>(c.grid.nv())};
  for (std::size_t j = 0; j < c.grid.nv(); ++j) {
    l.F[j] = c.F(i, j);
    l.A[j] = (*c.N)(i, j);
    l.M[j] = (*c.M)(i, j);
  }
  return l;
}

// Marches the base line in `first`, then every perpendicular line in parallel.
GridField<FrameState> sweep(const Chart& c, const FrameState& seed, Dir first) {
  const Grid2D& g = c.grid;
  GridField<FrameState> frames(g);
  const bool u_first = first == Dir::u;
  const std::size_t n_lines = u_first ? g.nu() : g.nv();
  const auto base = u_first ? march(row(c, c.v0_index), c.u0_index, seed, Dir::u, c.v0_index)
                            : march(column(c, c.u0_index), c.v0_index, seed, Dir::v, c.u0_index);
  std::vector<std::string> errors(n_lines);
  parallel_for(n_lines, [&](std::size_t k) {
    try {
      if (u_first) {
        const auto col = march(column(c, k), c.v0_index, base[k], Dir::v, k);
        for (std::size_t j = 0; j < g.nv(); ++j) frames(k, j) = col[j];
      } else {
        const auto r = march(row(c, k), c.u0_index, base[k], Dir::u, k);
        for (std::size_t i = 0; i < g.nu(); ++i) frames(i, k) = r[i];
      }
    } catch (const ReconstructionAbort& e) {
      errors[k] = e.what();
    }
  });
  for (const auto& e : errors)
    if (!e.empty()) throw ReconstructionAbort(e);
  return frames;
}

MeshField positions(const GridField<FrameState>& frames) {
  MeshField m(frames.nu(), frames.nv());
  for (std::size_t j = 0; j < frames.nv(); ++j)
    for (std::size_t i = 0; i < frames.nu(); ++i) m(i, j) = frames(i, j).x;
  return m;
}

void compatibility(ReconstructionResult& r) {
  const Grid2D& g = r.grid;
  const Chart& c = r.chart;
  MeshField X(g), Y(g), lu(g), lv(g);
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) {
      const FrameState& s = r.frames(i, j);
      const double F = c.F(i, j), L = (*c.L)(i, j), M = (*c.M)(i, j), N = (*c.N)(i, j);
      X(i, j) = s.X;
      Y(i, j) = s.Y;
      lu(i, j) = -(M / F) * s.X - (L / F) * s.Y;
      lv(i, j) = -(N / F) * s.X - (M / F) * s.Y;
    }
  const auto Xv = fd::partial(g, X, fd::Axis::v, 1, 3);
  const auto Yu = fd::partial(g, Y, fd::Axis::u, 1, 3);
  const auto luv = fd::partial(g, lu, fd::Axis::v, 1, 3);
  const auto lvu = fd::partial(g, lv, fd::Axis::u, 1, 3);
  r.compat_residual = Field2D(g, std::numeric_limits<double>::quiet_NaN());
  r.compat_max = 0.0;
  for (std::size_t j = 1; j + 1 < g.nv(); ++j)
    for (std::size_t i = 1; i + 1 < g.nu(); ++i) {
      const double e = std::max(euclidean_norm(Xv(i, j) - Yu(i, j)), euclidean_norm(luv(i, j) - lvu(i, j)));
      r.compat_residual(i, j) = e;
      r.compat_max = std::max(r.compat_max, e);
    }
}

double max_distance(const MeshField& a, const MeshField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) d = std::max(d, euclidean_norm(a.values()[k] - b.values()[k]));
  return d;
}

double field_max_abs(const Field2D& f) {
  double m = 0.0;
  for (const double x : f.values()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double frame_defect(const FrameState& s, double F) {
  return std::max({std::abs(inner(s.X, s.X)), std::abs(inner(s.Y, s.Y)), std::abs(inner(s.X, s.Y) - F),
                   std::abs(inner(s.l, s.l) - 1.0), std::abs(inner(s.X, s.l)), std::abs(inner(s.Y, s.l))});
}

FrameState initial_frame(double F0, const std::optional<FrameState>& custom) {
  if (!(F0 > 0.0)) throw InvalidFrameError("initial frame needs F0 > 0, got " + std::to_string(F0));
  if (!custom) return {{1, 1, 0}, (F0 / 2) * MinkowskiVec{-1, 1, 0}, {0, 0, 1}, {0, 0, 0}};
  const FrameState& s = *custom;
  const double tol = 1e-10 * (1.0 + F0);
  if (!finite(s)) throw InvalidFrameError("custom seed has non-finite components");
  if (std::abs(inner(s.X, s.X)) > tol) throw InvalidFrameError("custom seed: X is not null");
  if (std::abs(inner(s.Y, s.Y)) > tol) throw InvalidFrameError("custom seed: Y is not null");
  if (std::abs(inner(s.X, s.Y) - F0) > tol) throw InvalidFrameError("custom seed: <X,Y> differs from F0");
  if (std::abs(inner(s.l, s.l) - 1.0) > tol) throw InvalidFrameError("custom seed: l is not a unit spacelike vector");
  if (std::abs(inner(s.X, s.l)) > tol || std::abs(inner(s.Y, s.l)) > tol)
    throw InvalidFrameError("custom seed: l is not orthogonal to X and Y");
  if (!(det(s.X, s.Y, s.l) > 0.0)) throw InvalidFrameError("custom seed: frame is not positively oriented");
  return s;
}

ReconstructionResult reconstruct(const Chart& chart, const std::optional<FrameState>& seed,
                                 const ReconstructOptions& options) {
  if (chart.F.same_shape(chart.grid))
    for (std::size_t j = 0; j < chart.grid.nv(); ++j)
      for (std::size_t i = 0; i < chart.grid.nu(); ++i)
        if (!(chart.F(i, j) > 0.0))
          throw ReconstructionAbort("F <= 0 at node (i=" + std::to_string(i) + ", j=" + std::to_string(j) +
                                    "): F = " + std::to_string(chart.F(i, j)));
  chart.validate();
  ReconstructionResult r;
  r.grid = chart.grid;
  r.chart = accumulate_LN(chart);
  const Chart& c = r.chart;
  const Grid2D& g = r.grid;

  const ResidualReport nat = gauss_residual(c);
  double scale = 1.0;
  {
    double ln = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      ln = std::max(ln, std::abs(c.L->values()[k] * c.N->values()[k]));
      m2 = std::max(m2, c.M->values()[k] * c.M->values()[k]);
    }
    scale += ln + m2;
  }
  r.natural_residual_max = nat.max_abs;
  r.natural_warn_threshold = 1e-3 * scale;
  r.natural_warning = nat.max_abs > r.natural_warn_threshold;

  const FrameState s0 = initial_frame(c.F(c.u0_index, c.v0_index), seed);
  r.frames = sweep(c, s0, Dir::u);
  r.mesh = positions(r.frames);

  r.invariant_drift = Field2D(g);
  for (std::size_t j = 0; j < g.nv(); ++j)
    for (std::size_t i = 0; i < g.nu(); ++i) {
      r.invariant_drift(i, j) = frame_defect(r.frames(i, j), c.F(i, j));
      r.drift_max = std::max(r.drift_max, r.invariant_drift(i, j));
    }
  compatibility(r);

  if (options.transposed_probe) r.transposed_gap = max_distance(r.mesh, positions(sweep(c, s0, Dir::v)));

  if (options.form_check && g.nu() >= 5 && g.nv() >= 5) {
    const auto forms = analyze_mesh(g, r.mesh);
    r.form_mismatch.evaluated = true;
    for (std::size_t j = 0; j < g.nv(); ++j)
      for (std::size_t i = 0; i < g.nu(); ++i) {
        const FundamentalData& f = forms(i, j);
        // NaN (a node where the mesh itself is degenerate) propagates.
        const double dF = std::abs(f.F - c.F(i, j));
        const double dH = std::abs(f.H - c.H(i, j));
        if (std::isnan(dF) || dF > r.form_mismatch.F_max) r.form_mismatch.F_max = dF;
        if (std::isnan(dH) || dH > r.form_mismatch.H_max) r.form_mismatch.H_max = dH;
      }
  }
  return r;
}

std::pair<ReconstructionResult, ReconstructionResult> cmc_pair(const Field2D& K, double H, const Grid2D& grid,
                                                               std::size_t u0_index, std::size_t v0_index,
                                                               const std::optional<FrameState>& seed) {
  if (H == 0.0) throw PreconditionError("cmc_pair: H must be a non-zero constant (use minimal_from_K for H = 0)");
  CmcMetric metric = F_from_K_cmc(K, H);
  Chart c;
  c.grid = grid;
  c.F = std::move(metric.F);
  c.H = Field2D(grid, H);
  c.K = K;
  c.u0_index = u0_index;
  c.v0_index = v0_index;
  c.eps1 = 1;
  c.eps2 = metric.eps_product;
  auto plus = reconstruct(c, seed);
  c.eps1 = -1;
  c.eps2 = -metric.eps_product;
  auto minus = reconstruct(c, seed);
  return {std::move(plus), std::move(minus)};
}

ReconstructionResult minimal_from_K(const Field2D& K, const Grid2D& grid, std::size_t u0_index, std::size_t v0_index,
                                    const std::optional<FrameState>& seed, bool force) {
  const ResidualReport res = minimal_residual(K, grid);
  const double limit = 1e-3 * (1.0 + field_max_abs(K));
  if (res.max_abs > limit && !force)
    throw PreconditionError("minimal_from_K: K does not satisfy the minimal natural equation (residual " +
                            std::to_string(res.max_abs) + " > " + std::to_string(limit) + ")");
  CmcMetric metric = F_from_K_cmc(K, 0.0);
  Chart c;
  c.grid = grid;
  c.F = std::move(metric.F);
  c.H = Field2D(grid, 0.0);
  c.K = K;
  c.u0_index = u0_index;
  c.v0_index = v0_index;
  c.eps1 = 1;
  c.eps2 = metric.eps_product;
  return reconstruct(c, seed);
}

const char* to_string(Congruence c) {
  switch (c) {
    case Congruence::congruent:
      return "congruent";
    case Congruence::non_proper:
      return "non_proper";
    case Congruence::not_congruent:
      return "not_congruent";
  }
  return "unknown";
}

CongruenceReport congruence_check(const MeshField& a, const MeshField& b, const Grid2D& grid,
                                  std::optional<double> tol) {
  if (!a.same_shape(grid) || !b.same_shape(grid)) throw PreconditionError("congruence_check: meshes differ from grid");
  const auto fa = analyze_mesh(grid, a);
  const auto fb = analyze_mesh(grid, b);
  CongruenceReport r;
  double size = 0.0;
  auto nan_max = [](double acc, double x) { return std::isnan(x) ? x : std::max(acc, x); };
  for (std::size_t k = 0; k < fa.size(); ++k) {
    const FundamentalData &p = fa.values()[k], &q = fb.values()[k];
    size = std::max({size, std::abs(p.F), std::abs(p.L), std::abs(p.M), std::abs(p.N)});
    r.F_mismatch = nan_max(r.F_mismatch, std::abs(p.F - q.F));
    r.L_mismatch = nan_max(r.L_mismatch, std::abs(p.L - q.L));
    r.M_mismatch = nan_max(r.M_mismatch, std::abs(p.M - q.M));
    r.N_mismatch = nan_max(r.N_mismatch, std::abs(p.N - q.N));
    r.flipped_mismatch =
        nan_max(r.flipped_mismatch, std::max({std::abs(p.L + q.L), std::abs(p.M + q.M), std::abs(p.N + q.N)}));
  }
  r.tolerance = tol ? *tol : 1e-6 * (1.0 + size);
  const bool f_ok = r.F_mismatch <= r.tolerance;
  if (f_ok && r.L_mismatch <= r.tolerance && r.M_mismatch <= r.tolerance && r.N_mismatch <= r.tolerance)
    r.verdict = Congruence::congruent;
  else if (f_ok && r.flipped_mismatch <= r.tolerance)
    r.verdict = Congruence::non_proper;
  else
    r.verdict = Congruence::not_congruent;
  return r;
}

}  // namespace lsl
