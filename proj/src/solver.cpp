#include "vvlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vvlab/diagnostics.hpp"
#include "vvlab/nonlocal.hpp"

namespace vvlab {

void SolverOptions::validate() const {
  auto courant = [](double c, const char* name) {
    if (!(c > 0.0 && c <= 1.0)) {
      throw InvalidParams(std::string(name) + " must lie in (0, 1]");
    }
  };
  courant(cfl_hyp, "cfl_hyp");
  courant(cfl_visc, "cfl_visc");
  courant(cfl_disp, "cfl_disp");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidParams("t_end must be positive");
  if (snapshot_stride == 0) throw InvalidParams("snapshot_stride must be positive");
  if (snapshot_interval < 0.0) throw InvalidParams("snapshot_interval must be >= 0");
  if (fixed_dt < 0.0) throw InvalidParams("fixed_dt must be >= 0");
  if (max_steps == 0) throw InvalidParams("max_steps must be positive");
}

const DiagSeries* Trajectory::series(const std::string& name) const {
  for (const auto& s : diagnostics) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

namespace {

// Evaluates the semidiscrete operator with preallocated buffers.
class Operator {
 public:
  Operator(const ParamSet& params, const FluxModel& model, const Grid1D& grid, Limiter limiter)
      : params_(params),
        model_(model),
        grid_(grid),
        limiter_(limiter),
        spectral_(grid),
        flux_(grid.n_cells),
        p_static_(grid.n_cells),
        scratch_(grid.n_cells) {}

  // `P` is read when relaxed; otherwise P is rebuilt from u.
  void apply(const std::vector<double>& u, const std::vector<double>* P, std::vector<double>& du,
             std::vector<double>* dP) {
    const std::size_t n = grid_.n_cells;
    const double dx = grid_.dx;
    const double inv_dx = 1.0 / dx;

    const bool llf = limiter_ == Limiter::LocalLaxFriedrichs;
    double fa = model_.f(u[0]);
    for (std::size_t i = 0; i < n; ++i) {
      const double a = u[i];
      const double b = u[i + 1 < n ? i + 1 : 0];
      const double fb = model_.f(b);
      double F = 0.5 * (fa + fb);
      if (llf) F -= 0.5 * model_.max_speed(a, b) * (b - a);
      flux_[i] = F;
      fa = fb;
    }
    du[0] = -(flux_[0] - flux_[n - 1]) * inv_dx;
    for (std::size_t i = 1; i < n; ++i) du[i] = -(flux_[i] - flux_[i - 1]) * inv_dx;

    // Periodic neighbours at offset +-1 and +-2.
    auto at = [&](std::ptrdiff_t j) {
      const auto nn = static_cast<std::ptrdiff_t>(n);
      return u[static_cast<std::size_t>(j < 0 ? j + nn : (j >= nn ? j - nn : j))];
    };
    if (params_.eps > 0.0) {
      const double c = params_.eps * inv_dx * inv_dx;
      du[0] += c * (u[1] - 2.0 * u[0] + u[n - 1]);
      for (std::size_t i = 1; i + 1 < n; ++i) du[i] += c * (u[i + 1] - 2.0 * u[i] + u[i - 1]);
      du[n - 1] += c * (u[0] - 2.0 * u[n - 1] + u[n - 2]);
    }
    if (params_.beta > 0.0) {
      const double c = params_.beta * 0.5 * inv_dx * inv_dx * inv_dx;
      for (std::size_t i = 0; i < n; ++i) {
        if (i >= 2 && i + 2 < n) {
          du[i] += c * (u[i + 2] - 2.0 * u[i + 1] + 2.0 * u[i - 1] - u[i - 2]);
        } else {
          const auto k = static_cast<std::ptrdiff_t>(i);
          du[i] += c * (at(k + 2) - 2.0 * at(k + 1) + 2.0 * at(k - 1) - at(k - 2));
        }
      }
    }

    const std::vector<double>* Pcur = P;
    if (!params_.relaxed() && params_.gamma > 0.0) {
      spectral_.antiderivative(u, p_static_);
      Pcur = &p_static_;
    }
    if (params_.gamma > 0.0 && Pcur != nullptr) {
      for (std::size_t i = 0; i < n; ++i) du[i] += params_.gamma * (*Pcur)[i];
    }

    if (params_.relaxed() && dP != nullptr && P != nullptr) {
      spectral_.derivative(*P, *dP);
      spectral_.drop_nyquist(u, scratch_);
      const double inv = 1.0 / params_.delta;
      for (std::size_t i = 0; i < n; ++i) (*dP)[i] = ((*dP)[i] - scratch_[i]) * inv;
    }
  }

  void static_primitive(const std::vector<double>& u, std::vector<double>& P) {
    spectral_.antiderivative(u, P);
  }

 private:
  ParamSet params_;
  const FluxModel& model_;
  Grid1D grid_;
  Limiter limiter_;
  SpectralOperator spectral_;
  std::vector<double> flux_;
  std::vector<double> p_static_;
  std::vector<double> scratch_;
};

bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double max_speed(const std::vector<double>& u, const FluxModel& model) {
  double a = 0.0;
  for (double v : u) a = std::max(a, model.max_speed(v, v));
  return a;
}

double stable_dt_impl(const std::vector<double>& u, const ParamSet& params,
                      const FluxModel& model, const Grid1D& grid, const SolverOptions& opt) {
  constexpr double floor = 1e-12;
  const double dx = grid.dx;
  double dt = opt.cfl_hyp * dx / std::max(max_speed(u, model), floor);
  if (params.eps > 0.0) dt = std::min(dt, opt.cfl_visc * dx * dx / params.eps);
  if (params.beta > 0.0) dt = std::min(dt, opt.cfl_disp * dx * dx * dx / params.beta);
  // The relaxation equation transports P at speed 1/delta.
  if (params.delta > 0.0) dt = std::min(dt, opt.cfl_hyp * params.delta * dx);
  return dt;
}

}  // namespace

Rhs semidiscrete_rhs(const State& state, const ParamSet& params, const FluxModel& model,
                     const Grid1D& grid, Limiter limiter) {
  if (state.u.size() != grid.n_cells) throw std::invalid_argument("field length does not match grid");
  if (params.relaxed() && (!state.P || state.P->size() != grid.n_cells)) {
    throw std::invalid_argument("relaxed formulation needs P on the grid");
  }
  Operator op(params, model, grid, limiter);
  Rhs out{Field(grid.n_cells, state.t), std::nullopt};
  if (params.relaxed()) {
    out.dP = Field(grid.n_cells, state.t);
    op.apply(state.u.values, &state.P->values, out.du.values, &out.dP->values);
  } else {
    op.apply(state.u.values, nullptr, out.du.values, nullptr);
  }
  if (!out.du.all_finite() || (out.dP && !out.dP->all_finite())) {
    throw BlowUp(0, "non-finite right-hand side");
  }
  return out;
}

double stable_dt(const State& state, const ParamSet& params, const FluxModel& model,
                 const Grid1D& grid, const SolverOptions& options) {
  return stable_dt_impl(state.u.values, params, model, grid, options);
}

Trajectory solve(const Field& u0, const ParamSet& params, const FluxModel& model,
                 const Grid1D& grid, const SolverOptions& options) {
  params.validate();
  options.validate();
  if (u0.size() != grid.n_cells) throw std::invalid_argument("initial field length does not match grid");
  if (!u0.all_finite()) throw BlowUp(0, "non-finite initial data");

  const std::size_t n = grid.n_cells;
  const bool relaxed = params.relaxed();
  Operator op(params, model, grid, options.limiter);

  std::vector<double> u = u0.values;
  std::vector<double> P(n, 0.0);
  {
    // Checks the zero-mean precondition as a side effect.
    Field P0 = antiderivative(u0, grid);
    P = std::move(P0.values);
  }

  Trajectory traj;
  traj.grid = grid;
  traj.params = params;
  traj.model = model;
  traj.options = options;

  std::vector<double> p_snap(n);
  auto record = [&](double t) {
    State s;
    s.u = Field(u, t);
    if (relaxed) {
      s.P = Field(P, t);
    } else {
      op.static_primitive(u, p_snap);
      s.P = Field(p_snap, t);
    }
    s.t = t;
    traj.snapshots.push_back(std::move(s));
  };

  double t = 0.0;
  record(t);

  std::vector<double> k(n), u1(n), u2(n);
  std::vector<double> kP, P1, P2;
  if (relaxed) {
    kP.resize(n);
    P1.resize(n);
    P2.resize(n);
  }

  const double t_end = options.t_end;
  const bool by_interval = options.snapshot_interval > 0.0;
  std::size_t next_snap_index = 1;
  auto next_snap_time = [&]() {
    return std::min(t_end, options.snapshot_interval * static_cast<double>(next_snap_index));
  };

  std::size_t step = 0;
  while (t < t_end) {
    if (step >= options.max_steps) {
      if (traj.snapshots.back().t != t) record(t);
      traj.steps = step;
      traj.diagnostics = snapshot_series(traj);
      throw IncompleteRun(options.max_steps, std::make_shared<const Trajectory>(std::move(traj)));
    }

    double dt = options.fixed_dt > 0.0 ? options.fixed_dt
                                       : stable_dt_impl(u, params, model, grid, options);
    double target = t_end;
    if (by_interval) target = next_snap_time();
    bool lands = false;
    // Absorb a sliver that would otherwise leave a tiny final step.
    if (t + dt >= target - 1e-12 * std::max(1.0, target)) {
      dt = target - t;
      lands = true;
    }

    // SSP-RK3 (Shu-Osher form).
    op.apply(u, relaxed ? &P : nullptr, k, relaxed ? &kP : nullptr);
    for (std::size_t i = 0; i < n; ++i) u1[i] = u[i] + dt * k[i];
    if (relaxed) {
      for (std::size_t i = 0; i < n; ++i) P1[i] = P[i] + dt * kP[i];
    }

    op.apply(u1, relaxed ? &P1 : nullptr, k, relaxed ? &kP : nullptr);
    for (std::size_t i = 0; i < n; ++i) u2[i] = 0.75 * u[i] + 0.25 * (u1[i] + dt * k[i]);
    if (relaxed) {
      for (std::size_t i = 0; i < n; ++i) P2[i] = 0.75 * P[i] + 0.25 * (P1[i] + dt * kP[i]);
    }

    op.apply(u2, relaxed ? &P2 : nullptr, k, relaxed ? &kP : nullptr);
    constexpr double third = 1.0 / 3.0;
    constexpr double two_thirds = 2.0 / 3.0;
    for (std::size_t i = 0; i < n; ++i) u[i] = third * u[i] + two_thirds * (u2[i] + dt * k[i]);
    if (relaxed) {
      for (std::size_t i = 0; i < n; ++i) P[i] = third * P[i] + two_thirds * (P2[i] + dt * kP[i]);
    }

    ++step;
    if (!finite(u) || (relaxed && !finite(P))) {
      throw BlowUp(step, "non-finite state at t=" + std::to_string(t));
    }
    t = lands ? target : t + dt;

    bool take = false;
    if (by_interval) {
      if (lands) {
        take = true;
        ++next_snap_index;
      }
    } else {
      take = step % options.snapshot_stride == 0;
    }
    if (t >= t_end) take = true;
    if (take) record(t);
  }

  traj.steps = step;
  traj.diagnostics = snapshot_series(traj);
  return traj;
}

}  // namespace vvlab
