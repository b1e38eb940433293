#include "vvlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vvlab/errors.hpp"
#include "vvlab/nonlocal.hpp"

namespace vvlab {

std::string to_string(RegimeKind kind) {
  switch (kind) {
    case RegimeKind::OH: return "OH";
    case RegimeKind::KdVdist: return "KdVdist";
    case RegimeKind::KdVent: return "KdVent";
  }
  return "unknown";
}

RegimeKind regime_kind_from_string(const std::string& name) {
  if (name == "OH") return RegimeKind::OH;
  if (name == "KdVdist") return RegimeKind::KdVdist;
  if (name == "KdVent") return RegimeKind::KdVent;
  throw std::invalid_argument("unknown regime kind '" + name + "'");
}

std::vector<ParamSet> regime_sequence(const Regime& r) {
  if (!(r.eps0 > 0.0 && r.eps0 < 1.0)) throw InvalidParams("eps0 must lie in (0, 1)");
  if (!(r.delta0 > 0.0 && r.delta0 < 1.0)) throw InvalidParams("delta0 must lie in (0, 1)");
  if (!(r.c_gamma > 0.0)) throw InvalidParams("c_gamma must be positive");
  if (r.kind != RegimeKind::OH && !(r.c_beta > 0.0)) throw InvalidParams("c_beta must be positive");
  if (r.kind == RegimeKind::KdVent && !(r.theta > 0.0)) throw InvalidParams("theta must be positive");
  if (r.k_max < 0) throw InvalidParams("k_max must be >= 0");

  std::vector<ParamSet> out;
  out.reserve(static_cast<std::size_t>(r.k_max) + 1);
  for (int k = 0; k <= r.k_max; ++k) {
    ParamSet p;
    p.eps = std::ldexp(r.eps0, -k);
    p.delta = std::ldexp(r.delta0, -k);
    switch (r.kind) {
      case RegimeKind::OH:
        p.beta = 0.0;
        p.gamma = r.c_gamma * std::cbrt(p.eps) * p.delta;
        break;
      case RegimeKind::KdVdist:
        p.beta = r.c_beta * p.eps * p.eps;
        p.gamma = r.c_gamma * p.eps * p.delta;
        break;
      case RegimeKind::KdVent:
        p.beta = r.c_beta * std::pow(p.eps, 2.0 + r.theta);
        p.gamma = r.c_gamma * p.eps * p.delta;
        break;
    }
    auto in_range = [&](double v, const char* name, bool zero_ok) {
      if (!((zero_ok ? v >= 0.0 : v > 0.0) && v < 1.0)) {
        std::ostringstream os;
        os << name << " = " << v;
        throw RegimeOverflow(k, os.str());
      }
    };
    in_range(p.eps, "eps", false);
    in_range(p.delta, "delta", false);
    in_range(p.gamma, "gamma", false);
    in_range(p.beta, "beta", r.kind == RegimeKind::OH);
    out.push_back(p);
  }
  return out;
}

namespace {

double wrap_periodic(double x, double c, double L) {
  const double period = 2.0 * L;
  double d = std::fmod(x - c, period);
  if (d < -L) d += period;
  if (d >= L) d -= period;
  return d;
}

// Derivatives of psi(s) = exp(-1/(1-s^2)).
struct BumpDerivs {
  double d2;
  double d3;
};

BumpDerivs bump_derivs(double s) {
  if (std::abs(s) >= 1.0) return {0.0, 0.0};
  const double a = 1.0 - s * s;
  const double psi = std::exp(-1.0 / a);
  if (psi == 0.0) return {0.0, 0.0};
  const double g1 = -2.0 * s / (a * a);
  const double g2 = -2.0 / (a * a) - 8.0 * s * s / (a * a * a);
  const double g3 = -24.0 * s / (a * a * a) - 48.0 * s * s * s / (a * a * a * a);
  const double d2 = psi * (g1 * g1 + g2);
  const double d3 = psi * (g1 * (g1 * g1 + g2) + 2.0 * g1 * g2 + g3);
  return {d2, d3};
}

double bump_d2_max() {
  static const double m = [] {
    double best = 0.0;
    constexpr int n = 200000;
    for (int i = 0; i <= n; ++i) {
      const double s = -1.0 + 2.0 * i / static_cast<double>(n);
      best = std::max(best, std::abs(bump_derivs(s).d2));
    }
    return best;
  }();
  return m;
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void InitData::validate(const Grid1D& grid) const {
  std::visit(Overloaded{
                 [&](const SineModes& s) {
                   if (s.modes.empty()) throw InvalidParams("sine profile needs at least one mode");
                   for (const auto& [m, a] : s.modes) {
                     if (m <= 0) throw InvalidParams("sine mode numbers must be positive");
                     if (2 * static_cast<std::size_t>(m) >= grid.n_cells) {
                       throw InvalidParams("sine mode is not resolved by the grid");
                     }
                     if (!std::isfinite(a)) throw InvalidParams("sine amplitude must be finite");
                   }
                 },
                 [&](const DoubleBump& b) {
                   if (!(b.half_width > 0.0 && b.half_width < grid.half_width)) {
                     throw InvalidParams("bump half width must lie in (0, L)");
                   }
                 },
                 [&](const SmoothedRiemann& r) {
                   if (r.uL != -r.uR) {
                     throw InvalidParams("smoothed Riemann data must satisfy uL = -uR");
                   }
                   if (!(r.width_cells > 0.0)) throw InvalidParams("ramp width must be positive");
                 },
             },
             profile);
}

std::function<double(double)> InitData::function(const Grid1D& grid) const {
  const double L = grid.half_width;
  return std::visit(
      Overloaded{
          [L](const SineModes& s) -> std::function<double(double)> {
            return [L, s](double x) {
              double v = 0.0;
              for (const auto& [m, a] : s.modes) v += a * std::sin(m * std::numbers::pi * x / L);
              return v;
            };
          },
          [L](const DoubleBump& b) -> std::function<double(double)> {
            const double scale = b.amplitude / bump_d2_max();
            return [L, b, scale](double x) {
              return scale * bump_derivs(wrap_periodic(x, b.center, L) / b.half_width).d2;
            };
          },
          [L, &grid](const SmoothedRiemann& r) -> std::function<double(double)> {
            const double w = r.width_cells * grid.dx;
            return [L, r, w](double x) {
              return r.uR * (std::tanh(x / w) - std::tanh((x - L) / w) - std::tanh((x + L) / w));
            };
          },
      },
      profile);
}

std::optional<SmoothProfile> InitData::smooth(const Grid1D& grid) const {
  const double L = grid.half_width;
  if (const auto* s = std::get_if<SineModes>(&profile)) {
    SmoothProfile out;
    out.value = function(grid);
    out.derivative = [L, modes = s->modes](double x) {
      double v = 0.0;
      for (const auto& [m, a] : modes) {
        const double k = m * std::numbers::pi / L;
        v += a * k * std::cos(k * x);
      }
      return v;
    };
    out.lo = -L;
    out.hi = L;
    return out;
  }
  if (const auto* b = std::get_if<DoubleBump>(&profile)) {
    SmoothProfile out;
    out.value = function(grid);
    // d/dx of scale * psi''((x-c)/w) = scale * psi'''(s) / w.
    const double scale = b->amplitude / bump_d2_max();
    out.derivative = [L, b = *b, scale](double x) {
      return scale * bump_derivs(wrap_periodic(x, b.center, L) / b.half_width).d3 / b.half_width;
    };
    out.lo = -L;
    out.hi = L;
    return out;
  }
  return std::nullopt;
}

Field InitData::realize(const Grid1D& grid) const {
  validate(grid);
  Field u = sample(grid, function(grid));
  double mean = 0.0;
  for (double v : u.values) mean += v;
  mean /= static_cast<double>(grid.n_cells);
  for (double& v : u.values) v -= mean;
  const double tol = 1e-12;
  if (std::abs(mean_u(u, grid)) > tol) throw InvalidParams("initial data mean is not zero");
  const Field P0 = antiderivative(u, grid);
  double pm = 0.0;
  for (double v : P0.values) pm += v * grid.dx;
  if (std::abs(pm) > tol) throw InvalidParams("initial primitive mean is not zero");
  return u;
}

std::string InitData::describe() const {
  std::ostringstream os;
  std::visit(Overloaded{
                 [&](const SineModes& s) {
                   os << "sine";
                   for (const auto& [m, a] : s.modes) os << " (" << m << "," << a << ")";
                 },
                 [&](const DoubleBump& b) {
                   os << "double_bump c=" << b.center << " w=" << b.half_width
                      << " a=" << b.amplitude;
                 },
                 [&](const SmoothedRiemann& r) {
                   os << "smoothed_riemann uL=" << r.uL << " uR=" << r.uR;
                 },
             },
             profile);
  return os.str();
}

RateFit fit_rate(const std::vector<double>& distances, const std::vector<double>& eps_values) {
  if (distances.size() != eps_values.size()) {
    throw std::invalid_argument("distance and eps lists differ in length");
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < distances.size(); ++i) {
    const double d = distances[i];
    const double e = eps_values[i];
    if (std::isfinite(d) && d > 0.0 && std::isfinite(e) && e > 0.0) {
      xs.push_back(std::log(e));
      ys.push_back(std::log(d));
    }
  }
  if (xs.size() < 3) throw InsufficientData("rate fit needs at least three positive distances");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InsufficientData("rate fit needs distinct eps values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

FluxModel SweepConfig::flux() const {
  switch (model) {
    case FluxKind::Quadratic: return FluxModel::quadratic();
    case FluxKind::Cubic: return FluxModel::cubic();
    case FluxKind::Custom: break;
  }
  throw InvalidParams("sweeps support the quadratic and cubic fluxes only");
}

std::vector<EntropyPair> default_entropy_set(const FluxModel& model, double amplitude,
                                             double kappa) {
  std::vector<EntropyPair> out;
  out.push_back(make_entropy_pair(model, EntropyFamily::Square));
  for (double c : {-0.5, 0.0, 0.5}) {
    out.push_back(make_entropy_pair(model, EntropyFamily::SmoothedKruzkov, c * amplitude, kappa));
  }
  return out;
}

namespace {

void evaluate_cell(SweepCell& cell, const SweepConfig& cfg, const Field& u0, const Field& reference,
                   const FluxModel& model) {
  auto traj = std::make_shared<Trajectory>(solve(u0, cell.params, model, cfg.grid, cfg.options));
  for (double p : cfg.norms) {
    cell.distances.push_back(lp_distance(traj->final().u, reference, p, cfg.grid, cfg.window));
  }
  const double T = traj->final().t;
  const auto phis = test_function_lattice(0.0, T, cfg.entropy_nt, cfg.window.lo, cfg.window.hi,
                                          cfg.entropy_nx);
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& pair : default_entropy_set(model, u0.max_abs(), cfg.kruzkov_kappa)) {
    const EntropyResidual r = entropy_residual(*traj, pair, phis);
    floor = std::min(floor, r.worst);
    cell.coarse_snapshots = cell.coarse_snapshots || r.coarse_snapshots;
  }
  cell.entropy_floor = floor;
  cell.bounds = monitor_all(*traj);
  cell.trajectory = std::move(traj);
  cell.ok = true;
}

std::vector<std::optional<RateFit>> fit_all(const SweepResult& r) {
  std::vector<std::optional<RateFit>> out;
  for (std::size_t j = 0; j < r.norms.size(); ++j) {
    std::vector<double> d, e;
    for (const auto& c : r.cells) {
      if (!c.ok) continue;
      d.push_back(c.distances[j]);
      e.push_back(c.params.eps);
    }
    try {
      out.emplace_back(fit_rate(d, e));
    } catch (const InsufficientData&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg, std::size_t jobs) {
  cfg.options.validate();
  cfg.init.validate(cfg.grid);
  if (cfg.reference_refine == 0) throw InvalidParams("reference refine must be >= 1");
  if (cfg.norms.empty()) throw InvalidParams("at least one norm is required");
  const auto params = regime_sequence(cfg.regime);
  const FluxModel model = cfg.flux();
  const Field u0 = cfg.init.realize(cfg.grid);

  SweepResult result;
  result.norms = cfg.norms;
  result.reference = godunov_solve(cfg.init.function(cfg.grid), model, cfg.grid,
                                   cfg.options.t_end, cfg.reference_refine);

  result.cells.resize(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    result.cells[i].k = static_cast<int>(i);
    result.cells[i].params = params[i];
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < result.cells.size(); i = next++) {
      auto& cell = result.cells[i];
      try {
        evaluate_cell(cell, cfg, u0, result.reference, model);
      } catch (const std::exception& e) {
        cell = SweepCell{cell.k, cell.params, false, e.what(), {}, 0.0, false, {}, nullptr};
      }
    }
  };
  const std::size_t n_threads = std::max<std::size_t>(1, std::min(jobs, result.cells.size()));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  if (std::none_of(result.cells.begin(), result.cells.end(), [](const auto& c) { return c.ok; })) {
    throw SweepFailure("every sweep cell failed; first error: " + result.cells.front().error);
  }
  result.rates = fit_all(result);
  return result;
}

double reference_self_check(const SweepConfig& cfg, const SweepResult& result) {
  const FluxModel model = cfg.flux();
  const Field finer = godunov_solve(cfg.init.function(cfg.grid), model, cfg.grid,
                                    cfg.options.t_end, 2 * cfg.reference_refine);
  double worst = 0.0;
  for (const auto& cell : result.cells) {
    if (!cell.ok) continue;
    for (std::size_t j = 0; j < result.norms.size(); ++j) {
      const double d = lp_distance(cell.trajectory->final().u, finer, result.norms[j], cfg.grid,
                                   cfg.window);
      const double base = cell.distances[j];
      if (base > 0.0) worst = std::max(worst, std::abs(d - base) / base);
    }
  }
  return worst;
}

}  // namespace vvlab
