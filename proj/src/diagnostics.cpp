#include "vvlab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vvlab/errors.hpp"
#include "vvlab/nonlocal.hpp"

namespace vvlab {

double mean_u(const Field& u, const Grid1D& grid) {
  double s = 0.0;
  for (double v : u.values) s += v;
  return s * grid.dx;
}

double mean_P(const Field& P, const Grid1D& grid) { return mean_u(P, grid); }

double l2_norm_sq(const Field& w, const Grid1D& grid) {
  double s = 0.0;
  for (double v : w.values) s += v * v;
  return s * grid.dx;
}

double weighted_energy(const Field& u, const Field& P, double delta, double gamma,
                       const Grid1D& grid) {
  if (u.size() != grid.n_cells || P.size() != grid.n_cells) {
    throw std::invalid_argument("field length does not match grid");
  }
  const double w = delta * gamma;
  return l2_norm_sq(u, grid) + (w != 0.0 ? w * l2_norm_sq(P, grid) : 0.0);
}

std::vector<DiagSeries> snapshot_series(const Trajectory& traj) {
  const auto& g = traj.grid;
  const auto& p = traj.params;
  DiagSeries mu{"mean_u", {}, {}, std::nullopt};
  DiagSeries mp{"mean_P", {}, {}, std::nullopt};
  DiagSeries en{"energy", {}, {}, std::string("energy")};
  DiagSeries linf{"u_linf", {}, {}, std::string("u_linf")};
  DiagSeries grad{"grad_l2sq", {}, {}, std::nullopt};
  SpectralOperator op(g);
  Field du(g.n_cells);
  for (const auto& s : traj.snapshots) {
    const Field& P = *s.P;
    mu.push(s.t, mean_u(s.u, g));
    mp.push(s.t, mean_P(P, g));
    en.push(s.t, weighted_energy(s.u, P, p.delta, p.gamma, g));
    linf.push(s.t, s.u.max_abs());
    op.derivative(s.u.values, du.values);
    grad.push(s.t, l2_norm_sq(du, g));
  }
  return {mu, mp, en, linf, grad};
}

DiagSeries energy_balance_residual(const Trajectory& traj) {
  if (traj.params.beta != 0.0) {
    throw InapplicableIdentity("energy balance holds only without dispersion (beta = 0)");
  }
  const auto& g = traj.grid;
  const auto& p = traj.params;
  DiagSeries out{"energy_residual", {}, {}, std::string("energy")};
  SpectralOperator op(g);
  Field du(g.n_cells);
  const auto& snaps = traj.snapshots;
  for (std::size_t n = 0; n + 1 < snaps.size(); ++n) {
    const double e0 = weighted_energy(snaps[n].u, *snaps[n].P, p.delta, p.gamma, g);
    const double e1 = weighted_energy(snaps[n + 1].u, *snaps[n + 1].P, p.delta, p.gamma, g);
    const double dt = snaps[n + 1].t - snaps[n].t;
    double dissipation = 0.0;
    if (p.eps != 0.0) {
      op.derivative(snaps[n].u.values, du.values);
      dissipation = 2.0 * p.eps * l2_norm_sq(du, g);
    }
    out.push(snaps[n].t, (e1 - e0) / dt + dissipation);
  }
  return out;
}

namespace {

double bump(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double s = 1.0 - r * r;
  return s * s * s;
}

double bump_prime(double r) {
  if (std::abs(r) >= 1.0) return 0.0;
  const double s = 1.0 - r * r;
  return -6.0 * r * s * s;
}

// Signed periodic offset of x from c, in [-period/2, period/2).
double wrap(double x, double c, double period) {
  double d = std::fmod(x - c, period);
  if (d < -0.5 * period) d += period;
  if (d >= 0.5 * period) d -= period;
  return d;
}

}  // namespace

double TestFunction::value(double t, double x, double period) const {
  return amplitude * bump((t - t_center) / t_half_width) *
         bump(wrap(x, x_center, period) / x_half_width);
}

double TestFunction::d_t(double t, double x, double period) const {
  return amplitude * bump_prime((t - t_center) / t_half_width) / t_half_width *
         bump(wrap(x, x_center, period) / x_half_width);
}

double TestFunction::d_x(double t, double x, double period) const {
  return amplitude * bump((t - t_center) / t_half_width) *
         bump_prime(wrap(x, x_center, period) / x_half_width) / x_half_width;
}

std::vector<TestFunction> test_function_lattice(double t_lo, double t_hi, std::size_t n_t,
                                                double x_lo, double x_hi, std::size_t n_x) {
  if (n_t == 0 || n_x == 0 || !(t_hi > t_lo) || !(x_hi > x_lo)) {
    throw InvalidTestFunction("empty test-function lattice");
  }
  // Supports [c - w, c + w] with c = lo + (j+1) w, w = (hi - lo)/(n + 1).
  const double wt = (t_hi - t_lo) / static_cast<double>(n_t + 1);
  const double wx = (x_hi - x_lo) / static_cast<double>(n_x + 1);
  std::vector<TestFunction> out;
  out.reserve(n_t * n_x);
  for (std::size_t a = 0; a < n_t; ++a) {
    for (std::size_t b = 0; b < n_x; ++b) {
      out.push_back(TestFunction{t_lo + static_cast<double>(a + 1) * wt, wt,
                                 x_lo + static_cast<double>(b + 1) * wx, wx, 1.0});
    }
  }
  return out;
}

EntropyResidual entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                                 std::span<const TestFunction> phis) {
  const auto& g = traj.grid;
  const auto& snaps = traj.snapshots;
  if (snaps.empty()) throw std::invalid_argument("trajectory has no snapshots");
  const double t_final = snaps.back().t;
  const double period = g.length();
  for (const auto& phi : phis) {
    if (!(phi.amplitude >= 0.0)) throw InvalidTestFunction("test function must be nonnegative");
    if (!(phi.t_half_width > 0.0) || !(phi.x_half_width > 0.0)) {
      throw InvalidTestFunction("test function widths must be positive");
    }
    if (phi.x_half_width >= 0.5 * period) {
      throw InvalidTestFunction("test function support wraps the periodic cell");
    }
    if (phi.t_center + phi.t_half_width > t_final * (1.0 + 1e-12)) {
      throw InvalidTestFunction("test function support extends past the final snapshot");
    }
  }

  const std::size_t n = g.n_cells;
  const std::size_t m = snaps.size();
  const double gamma = traj.params.gamma;

  // Trapezoid weights over snapshot times.
  std::vector<double> w(m, 0.0);
  bool coarse = false;
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double h = snaps[k + 1].t - snaps[k].t;
    w[k] += 0.5 * h;
    w[k + 1] += 0.5 * h;
    if (h > g.dx * (1.0 + 1e-9)) coarse = true;
  }

  std::vector<double> eta(m * n), q(m * n), src(m * n, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    const auto& u = snaps[k].u.values;
    for (std::size_t i = 0; i < n; ++i) {
      eta[k * n + i] = pair.eta(u[i]);
      q[k * n + i] = pair.q(u[i]);
    }
    if (gamma != 0.0) {
      const auto& P = snaps[k].P->values;
      for (std::size_t i = 0; i < n; ++i) src[k * n + i] = gamma * pair.deta(u[i]) * P[i];
    }
  }

  EntropyResidual out;
  out.coarse_snapshots = coarse;
  out.values.reserve(phis.size());
  std::vector<double> xs = g.nodes();
  std::vector<double> bx(n), bpx(n);
  for (const auto& phi : phis) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = wrap(xs[i], phi.x_center, period) / phi.x_half_width;
      bx[i] = bump(r);
      bpx[i] = bump_prime(r) / phi.x_half_width;
    }
    double total = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double r = (snaps[k].t - phi.t_center) / phi.t_half_width;
      if (std::abs(r) >= 1.0 || w[k] == 0.0) continue;
      const double bt = bump(r);
      const double bpt = bump_prime(r) / phi.t_half_width;
      double row = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (bx[i] == 0.0) continue;
        row += eta[k * n + i] * bpt * bx[i] + q[k * n + i] * bt * bpx[i] +
               src[k * n + i] * bt * bx[i];
      }
      total += w[k] * row;
    }
    const double b0 = bump((snaps.front().t - phi.t_center) / phi.t_half_width);
    if (b0 != 0.0) {
      double row = 0.0;
      for (std::size_t i = 0; i < n; ++i) row += eta[i] * bx[i];
      total += b0 * row;
    }
    out.values.push_back(phi.amplitude * total * g.dx);
  }
  if (!out.values.empty()) {
    auto it = std::min_element(out.values.begin(), out.values.end());
    out.worst = *it;
    out.worst_index = static_cast<std::size_t>(it - out.values.begin());
  }
  return out;
}

double lp_distance(const Field& a, const Field& b, double p, const Grid1D& grid,
                   std::optional<Window> window) {
  if (a.size() != grid.n_cells || b.size() != grid.n_cells) {
    throw std::invalid_argument("field length does not match grid");
  }
  if (!(p >= 1.0)) throw std::invalid_argument("norm exponent must be >= 1");
  const bool inf = std::isinf(p);
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double x = grid.x(i);
    if (window && !(x >= window->lo && x < window->hi)) continue;
    ++count;
    const double d = std::abs(a[i] - b[i]);
    if (inf) {
      acc = std::max(acc, d);
    } else if (p == 1.0) {
      acc += d;
    } else if (p == 2.0) {
      acc += d * d;
    } else {
      acc += std::pow(d, p);
    }
  }
  if (count == 0) throw EmptyWindow("no grid node falls inside the window");
  if (inf) return acc;
  acc *= grid.dx;
  if (p == 1.0) return acc;
  if (p == 2.0) return std::sqrt(acc);
  return std::pow(acc, 1.0 / p);
}

std::string to_string(BoundId id) {
  switch (id) {
    case BoundId::UInfinity: return "u_linf";
    case BoundId::Energy: return "energy";
    case BoundId::PTimeL2: return "p_l2_time";
    case BoundId::PxL2: return "px_l2";
    case BoundId::PInfinity: return "p_linf";
    case BoundId::UInfinityDispersive: return "u_linf_dispersive";
    case BoundId::UL6: return "u_l6";
    case BoundId::Interpolation: return "interpolation";
  }
  return "unknown";
}

const std::vector<BoundId>& all_bounds() {
  static const std::vector<BoundId> ids{
      BoundId::UInfinity, BoundId::Energy,    BoundId::PTimeL2,
      BoundId::PxL2,      BoundId::PInfinity, BoundId::UInfinityDispersive,
      BoundId::UL6,       BoundId::Interpolation};
  return ids;
}

BoundId bound_from_string(const std::string& name) {
  for (BoundId id : all_bounds()) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown bound id '" + name + "'");
}

double default_cap(BoundId id) {
  switch (id) {
    case BoundId::UInfinity: return 1.0;
    case BoundId::Energy: return 1.0 + 1e-6;
    case BoundId::PTimeL2: return 1.0 + 1e-6;
    case BoundId::PxL2: return 10.0;
    case BoundId::PInfinity: return 10.0;
    case BoundId::UInfinityDispersive: return 10.0;
    case BoundId::UL6: return 2.0;
    case BoundId::Interpolation: return 1.0 + 1e-8;
  }
  return 1.0;
}

bool bound_applicable(BoundId id, const Trajectory& traj) {
  const auto& p = traj.params;
  switch (id) {
    case BoundId::UInfinity:
    case BoundId::Energy:
    case BoundId::UL6:
    case BoundId::Interpolation:
      return true;
    case BoundId::PTimeL2: return p.delta > 0.0 && p.gamma > 0.0;
    case BoundId::PxL2: return p.delta > 0.0 && p.eps > 0.0;
    case BoundId::PInfinity: return p.delta > 0.0 && p.gamma > 0.0 && p.eps > 0.0;
    case BoundId::UInfinityDispersive: return p.beta > 0.0;
  }
  return false;
}

namespace {

double lp_norm(const Field& w, const Grid1D& g, double p) {
  double s = 0.0;
  for (double v : w.values) s += std::pow(std::abs(v), p);
  return std::pow(s * g.dx, 1.0 / p);
}

}  // namespace

BoundReport bound_monitor(const Trajectory& traj, BoundId id, std::optional<double> cap) {
  if (!bound_applicable(id, traj)) {
    throw InapplicableIdentity("bound " + to_string(id) + " does not apply to this regime");
  }
  const auto& g = traj.grid;
  const auto& p = traj.params;
  const auto& snaps = traj.snapshots;
  const double T = snaps.back().t;
  const Field& u0 = snaps.front().u;
  const double e0 = weighted_energy(u0, *snaps.front().P, p.delta, p.gamma, g);

  BoundReport r;
  r.id = id;
  r.cap = cap.value_or(default_cap(id));

  SpectralOperator op(g);
  Field dP(g.n_cells);

  switch (id) {
    case BoundId::UInfinity:
      r.scaling_expr = "||u0||_inf + T";
      r.scaling = u0.max_abs() + T;
      for (const auto& s : snaps) r.measured = std::max(r.measured, s.u.max_abs());
      break;
    case BoundId::Energy:
      r.scaling_expr = "C0 = ||u0||^2 + delta gamma ||P0||^2";
      r.scaling = e0;
      for (const auto& s : snaps) {
        r.measured = std::max(r.measured, weighted_energy(s.u, *s.P, p.delta, p.gamma, g));
      }
      break;
    case BoundId::PTimeL2: {
      r.scaling_expr = "sqrt(C0 T / (delta gamma))";
      r.scaling = std::sqrt(e0 * T / (p.delta * p.gamma));
      double acc = 0.0;
      for (std::size_t k = 0; k + 1 < snaps.size(); ++k) {
        acc += 0.5 * (snaps[k + 1].t - snaps[k].t) *
               (l2_norm_sq(*snaps[k].P, g) + l2_norm_sq(*snaps[k + 1].P, g));
      }
      r.measured = std::sqrt(acc);
      break;
    }
    case BoundId::PxL2:
      r.scaling_expr = "1 / (delta sqrt(eps))";
      r.scaling = 1.0 / (p.delta * std::sqrt(p.eps));
      for (const auto& s : snaps) {
        op.derivative(s.P->values, dP.values);
        r.measured = std::max(r.measured, std::sqrt(l2_norm_sq(dP, g)));
      }
      break;
    case BoundId::PInfinity:
      r.scaling_expr = "delta^-3/4 gamma^-1/4 eps^-1/4";
      r.scaling = std::pow(p.delta, -0.75) * std::pow(p.gamma, -0.25) * std::pow(p.eps, -0.25);
      for (const auto& s : snaps) r.measured = std::max(r.measured, s.P->max_abs());
      break;
    case BoundId::UInfinityDispersive:
      r.scaling_expr = "beta^-1/3";
      r.scaling = std::cbrt(1.0 / p.beta);
      for (const auto& s : snaps) r.measured = std::max(r.measured, s.u.max_abs());
      break;
    case BoundId::UL6:
      r.scaling_expr = "||u0||_6 + T";
      r.scaling = lp_norm(u0, g, 6.0) + T;
      for (const auto& s : snaps) r.measured = std::max(r.measured, lp_norm(s.u, g, 6.0));
      break;
    case BoundId::Interpolation:
      r.scaling_expr = "1 (ratio ||P||_inf^2 / (||P||_2 ||P_x||_2))";
      r.scaling = 1.0;
      for (const auto& s : snaps) {
        const double pinf = s.P->max_abs();
        if (pinf == 0.0) continue;
        op.derivative(s.P->values, dP.values);
        const double denom = std::sqrt(l2_norm_sq(*s.P, g) * l2_norm_sq(dP, g));
        r.measured = std::max(r.measured, pinf * pinf / denom);
      }
      break;
  }
  r.fitted_constant = r.scaling > 0.0 ? r.measured / r.scaling : 0.0;
  r.pass = r.measured <= r.cap * r.scaling;
  return r;
}

std::vector<BoundReport> monitor_all(const Trajectory& traj) {
  std::vector<BoundReport> out;
  for (BoundId id : all_bounds()) {
    if (bound_applicable(id, traj)) out.push_back(bound_monitor(traj, id));
  }
  return out;
}

}  // namespace vvlab
