#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "vvlab/diagnostics.hpp"
#include "vvlab/model.hpp"
#include "vvlab/reference.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

// Scaling regimes, each a geometric sequence with ratio 2 in eps and delta.
//   OH:      beta = 0,                 gamma = c_gamma eps^(1/3) delta
//   KdVdist: beta = c_beta eps^2,      gamma = c_gamma eps delta
//   KdVent:  beta = c_beta eps^(2+th), gamma = c_gamma eps delta
enum class RegimeKind { OH, KdVdist, KdVent };

struct Regime {
  RegimeKind kind = RegimeKind::OH;
  double eps0 = 0.05;
  double delta0 = 0.05;
  double c_gamma = 1.0;
  double c_beta = 1.0;
  double theta = 0.5;
  int k_max = 4;
};

std::string to_string(RegimeKind kind);
RegimeKind regime_kind_from_string(const std::string& name);

// k_max + 1 parameter sets. Throws RegimeOverflow if any entry leaves (0, 1)
// (beta is allowed to be 0 in the OH regime) and InvalidParams for bad inputs.
std::vector<ParamSet> regime_sequence(const Regime& regime);

struct SineModes {
  std::vector<std::pair<int, double>> modes;  // (m, amplitude): a sin(m pi x / L)
};

// Second derivative of the C-infinity bump exp(-1/(1-s^2)), s = (x-c)/w,
// scaled so its maximum modulus is `amplitude`.
struct DoubleBump {
  double center = 0.0;
  double half_width = 0.5;
  double amplitude = 1.0;
};

// Antisymmetric jump uL = -uR at x = 0 (and back at the seam), mollified by
// tanh ramps of width `width_cells` grid cells.
struct SmoothedRiemann {
  double uL = -1.0;
  double uR = 1.0;
  double width_cells = 3.0;
};

struct InitData {
  std::variant<SineModes, DoubleBump, SmoothedRiemann> profile;

  // Throws InvalidParams for inadmissible data (e.g. uL != -uR).
  void validate(const Grid1D& grid) const;
  std::function<double(double)> function(const Grid1D& grid) const;
  // Value and derivative for smooth profiles; empty for SmoothedRiemann.
  std::optional<SmoothProfile> smooth(const Grid1D& grid) const;
  // Grid samples with the discrete mean removed. Asserts both zero means.
  Field realize(const Grid1D& grid) const;
  std::string describe() const;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares of log d against log eps. Throws InsufficientData with fewer
// than three finite positive pairs.
RateFit fit_rate(const std::vector<double>& distances, const std::vector<double>& eps_values);

struct SweepConfig {
  Regime regime;
  Grid1D grid = make_grid(1.0, 512);
  FluxKind model = FluxKind::Quadratic;
  InitData init{SineModes{{{2, 1.0}}}};
  SolverOptions options;
  std::size_t reference_refine = 8;
  Window window{-0.5, 0.5};
  std::vector<double> norms{1.0, 2.0};
  // Entropy test-function lattice over [0, T] x window.
  std::size_t entropy_nt = 3;
  std::size_t entropy_nx = 8;
  double kruzkov_kappa = 0.05;

  FluxModel flux() const;
};

struct SweepCell {
  int k = 0;
  ParamSet params;
  bool ok = false;
  std::string error;
  std::vector<double> distances;  // one per SweepConfig::norms entry
  double entropy_floor = 0.0;
  bool coarse_snapshots = false;  // entropy quadrature saw snapshot spacing > dx
  std::vector<BoundReport> bounds;
  std::shared_ptr<const Trajectory> trajectory;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // sorted by k
  std::vector<double> norms;
  std::vector<std::optional<RateFit>> rates;  // per norm; empty on insufficient data
  Field reference;
};

// Entropy pairs checked by the sweep: the square entropy and smoothed
// Kruzkov entropies centered at -a/2, 0, a/2 with a = max|u0|.
std::vector<EntropyPair> default_entropy_set(const FluxModel& model, double amplitude,
                                             double kappa);

// Solves every cell of the regime (up to `jobs` at once), compares each final
// state against one monotone reference solve, and fits log-log rates.
// Failed cells are recorded; throws SweepFailure if every cell fails.
SweepResult run_sweep(const SweepConfig& config, std::size_t jobs = 1);

// Largest relative change of the cell distances when the reference is
// recomputed at twice the refinement.
double reference_self_check(const SweepConfig& config, const SweepResult& result);

}  // namespace vvlab
