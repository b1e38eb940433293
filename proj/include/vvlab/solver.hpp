#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vvlab/errors.hpp"
#include "vvlab/model.hpp"
#include "vvlab/series.hpp"

namespace vvlab {

// Two-point numerical flux for the hyperbolic term. `None` is the plain
// central average: it is not entropy stable and exists as a negative control.
enum class Limiter { None, LocalLaxFriedrichs };

struct SolverOptions {
  double cfl_hyp = 0.4;
  double cfl_visc = 0.25;
  double cfl_disp = 0.1;
  double t_end = 1.0;
  // Record every `snapshot_stride` accepted steps. When `snapshot_interval`
  // is positive it takes precedence: steps are shortened to land on each
  // multiple of the interval.
  std::size_t snapshot_stride = 1;
  double snapshot_interval = 0.0;
  Limiter limiter = Limiter::LocalLaxFriedrichs;
  std::size_t max_steps = 50'000'000;
  // Positive value overrides the adaptive step (still clamped to t_end).
  double fixed_dt = 0.0;

  void validate() const;
};

// Solution state. `P` is carried only by the relaxed formulation; the static
// one recomputes it from u. Snapshots in a Trajectory always carry P.
struct State {
  Field u;
  std::optional<Field> P;
  double t = 0.0;
};

struct Trajectory {
  Grid1D grid;
  ParamSet params;
  FluxModel model = FluxModel::quadratic();
  SolverOptions options;
  std::vector<State> snapshots;
  std::vector<DiagSeries> diagnostics;
  std::size_t steps = 0;

  const DiagSeries* series(const std::string& name) const;
  const State& initial() const { return snapshots.front(); }
  const State& final() const { return snapshots.back(); }
};

class IncompleteRun : public Error {
 public:
  IncompleteRun(std::size_t steps, std::shared_ptr<const Trajectory> partial)
      : Error("step cap of " + std::to_string(steps) + " reached before t_end"),
        partial_(std::move(partial)) {}
  const Trajectory& partial() const { return *partial_; }

 private:
  std::shared_ptr<const Trajectory> partial_;
};

struct Rhs {
  Field du;
  std::optional<Field> dP;
};

// du/dt = -(F_{i+1/2} - F_{i-1/2})/dx + eps D2 u + beta D3 u + gamma P, with
// central D2/D3 stencils; dP/dt from relax_rhs when delta > 0.
// Throws BlowUp if any term is not finite.
Rhs semidiscrete_rhs(const State& state, const ParamSet& params, const FluxModel& model,
                     const Grid1D& grid, Limiter limiter = Limiter::LocalLaxFriedrichs);

// Largest explicit step allowed by the hyperbolic, viscous, dispersive and
// relaxation terms; terms with a zero coefficient drop out.
double stable_dt(const State& state, const ParamSet& params, const FluxModel& model,
                 const Grid1D& grid, const SolverOptions& options);

// SSP-RK3 method of lines from u0 to options.t_end.
// Throws MeanViolation if u0 is not mean-free, BlowUp on non-finite values,
// and IncompleteRun once options.max_steps steps are taken.
Trajectory solve(const Field& u0, const ParamSet& params, const FluxModel& model,
                 const Grid1D& grid, const SolverOptions& options);

}  // namespace vvlab
