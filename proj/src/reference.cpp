#include "vvlab/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "vvlab/errors.hpp"

namespace vvlab {

double RiemannSolution::at(double xi) const {
  switch (wave) {
    case Wave::Constant: return uL;
    case Wave::Shock: return xi < speed ? uL : uR;
    case Wave::Rarefaction:
      if (xi <= uL) return uL;
      if (xi >= uR) return uR;
      return xi;
  }
  return uL;
}

double RiemannSolution::operator()(double x, double t) const {
  if (t <= 0.0) return x < 0.0 ? uL : uR;
  return at(x / t);
}

RiemannSolution riemann_burgers(double uL, double uR) {
  RiemannSolution s{uL, uR, RiemannSolution::Wave::Constant, 0.0};
  if (uL > uR) {
    s.wave = RiemannSolution::Wave::Shock;
    s.speed = 0.5 * (uL + uR);
  } else if (uL < uR) {
    s.wave = RiemannSolution::Wave::Rarefaction;
  }
  return s;
}

double exact_riemann_burgers(double uL, double uR, double xi) {
  return riemann_burgers(uL, uR).at(xi);
}

namespace {

// Forward Euler with the Rusanov flux on a periodic array.
void monotone_march(std::vector<double>& u, const FluxModel& model, double dx, double T,
                    double cfl) {
  const std::size_t n = u.size();
  std::vector<double> F(n);
  double t = 0.0;
  std::size_t step = 0;
  while (t < T) {
    double a = 0.0;
    for (double v : u) a = std::max(a, model.max_speed(v, v));
    double dt = cfl * dx / std::max(a, 1e-12);
    bool last = false;
    if (t + dt >= T - 1e-12 * std::max(1.0, T)) {
      dt = T - t;
      last = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double l = u[i];
      const double r = u[(i + 1) % n];
      F[i] = 0.5 * (model.f(l) + model.f(r)) - 0.5 * model.max_speed(l, r) * (r - l);
    }
    const double lambda = dt / dx;
    for (std::size_t i = 0; i < n; ++i) u[i] -= lambda * (F[i] - F[(i + n - 1) % n]);
    ++step;
    if (!std::all_of(u.begin(), u.end(), [](double v) { return std::isfinite(v); })) {
      throw BlowUp(step, "monotone oracle produced non-finite values");
    }
    t = last ? T : t + dt;
  }
}

Field finish(std::vector<double>& fine, const FluxModel& model, const Grid1D& grid, double T,
             std::size_t refine, const OracleOptions& options) {
  const double lo = *std::min_element(fine.begin(), fine.end());
  const double hi = *std::max_element(fine.begin(), fine.end());
  if (T > 0.0) monotone_march(fine, model, grid.dx / static_cast<double>(refine), T, options.cfl);
  const double slack = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  for (double v : fine) {
    if (v < lo - slack || v > hi + slack) {
      throw BlowUp(0, "monotone oracle violated the discrete maximum principle");
    }
  }
  Field out(grid.n_cells, T);
  const double inv = 1.0 / static_cast<double>(refine);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    double s = 0.0;
    for (std::size_t m = 0; m < refine; ++m) s += fine[i * refine + m];
    out[i] = s * inv;
  }
  return out;
}

void check_args(const Grid1D& grid, double T, std::size_t refine, const OracleOptions& options) {
  if (refine == 0) throw std::invalid_argument("refine must be >= 1");
  if (!(T >= 0.0)) throw std::invalid_argument("final time must be >= 0");
  if (!(options.cfl > 0.0 && options.cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  (void)grid;
}

void check_mean(const std::vector<double>& u, double dx, const OracleOptions& options) {
  if (!options.require_zero_mean) return;
  double mean = 0.0;
  double scale = 0.0;
  for (double v : u) {
    mean += v * dx;
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-10 * std::max(1.0, scale) * dx * static_cast<double>(u.size());
  if (!(std::abs(mean) <= tol)) throw MeanViolation(mean, tol);
}

}  // namespace

Field godunov_solve(const Field& u0, const FluxModel& model, const Grid1D& grid, double T,
                    std::size_t refine, const OracleOptions& options) {
  check_args(grid, T, refine, options);
  if (u0.size() != grid.n_cells) throw std::invalid_argument("field length does not match grid");
  check_mean(u0.values, grid.dx, options);
  std::vector<double> fine(grid.n_cells * refine);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    for (std::size_t m = 0; m < refine; ++m) fine[i * refine + m] = u0[i];
  }
  return finish(fine, model, grid, T, refine, options);
}

Field godunov_solve(const std::function<double(double)>& u0, const FluxModel& model,
                    const Grid1D& grid, double T, std::size_t refine,
                    const OracleOptions& options) {
  check_args(grid, T, refine, options);
  const std::size_t nf = grid.n_cells * refine;
  const double dxf = grid.dx / static_cast<double>(refine);
  std::vector<double> fine(nf);
  for (std::size_t j = 0; j < nf; ++j) {
    fine[j] = u0(-grid.half_width - 0.5 * grid.dx + (static_cast<double>(j) + 0.5) * dxf);
  }
  check_mean(fine, dxf, options);
  return finish(fine, model, grid, T, refine, options);
}

double breaking_time(const SmoothProfile& u0, const FluxModel& model) {
  auto slope = [&](double x) { return model.d2f(u0.value(x)) * u0.derivative(x); };
  constexpr std::size_t samples = 20000;
  const double h = (u0.hi - u0.lo) / static_cast<double>(samples);
  double best_x = u0.lo;
  double best = slope(best_x);
  for (std::size_t i = 1; i < samples; ++i) {
    const double x = u0.lo + static_cast<double>(i) * h;
    const double s = slope(x);
    if (s < best) {
      best = s;
      best_x = x;
    }
  }
  const auto refined =
      boost::math::tools::brent_find_minima(slope, best_x - h, best_x + h, 52);
  best = std::min(best, refined.second);
  if (!(best < 0.0)) return std::numeric_limits<double>::infinity();
  return -1.0 / best;
}

CharacteristicSolution::CharacteristicSolution(SmoothProfile u0, FluxModel model)
    : u0_(std::move(u0)), model_(std::move(model)) {
  t_star_ = vvlab::breaking_time(u0_, model_);
  constexpr std::size_t samples = 20000;
  const double h = (u0_.hi - u0_.lo) / static_cast<double>(samples);
  u_min_ = std::numeric_limits<double>::infinity();
  u_max_ = -u_min_;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double v = u0_.value(u0_.lo + static_cast<double>(i) * h);
    u_min_ = std::min(u_min_, v);
    u_max_ = std::max(u_max_, v);
  }
  // Sampling may miss the true extrema slightly.
  const double pad = 1e-6 * std::max(1.0, u_max_ - u_min_);
  u_min_ -= pad;
  u_max_ += pad;
}

double CharacteristicSolution::operator()(double x, double t) const {
  if (t >= t_star_) throw PreShockViolation(t, t_star_);
  if (t == 0.0) return u0_.value(x);
  auto g = [&](double u) { return u - u0_.value(x - model_.df(u) * t); };
  auto dg = [&](double u) {
    return 1.0 + u0_.derivative(x - model_.df(u) * t) * model_.d2f(u) * t;
  };
  double lo = u_min_;
  double hi = u_max_;
  double u = std::clamp(u0_.value(x), lo, hi);
  constexpr double tol = 1e-12;
  for (int it = 0; it < 200; ++it) {
    const double r = g(u);
    if (std::abs(r) <= tol) return u;
    // g(lo) <= 0 <= g(hi) on the value range of u0.
    if (r < 0.0) {
      lo = u;
    } else {
      hi = u;
    }
    const double d = dg(u);
    double next = u - r / d;
    if (!(d > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(u))) {
      if (std::abs(g(next)) <= tol) return next;
      break;
    }
    u = next;
  }
  throw RootFindError("characteristic iteration did not converge at x=" + std::to_string(x));
}

double characteristics_smooth(const SmoothProfile& u0, const FluxModel& model, double x,
                              double t) {
  return CharacteristicSolution(u0, model)(x, t);
}

}  // namespace vvlab
