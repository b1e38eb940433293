#pragma once

#include <cstddef>
#include <functional>

#include "vvlab/model.hpp"

namespace vvlab {

// Self-similar solution of the Burgers Riemann problem, f(u) = u^2/2.
struct RiemannSolution {
  enum class Wave { Constant, Shock, Rarefaction };

  double uL = 0.0;
  double uR = 0.0;
  Wave wave = Wave::Constant;
  double speed = 0.0;  // shock speed; 0 otherwise

  // u at similarity coordinate xi = x / t.
  double at(double xi) const;
  double operator()(double x, double t) const;
};

RiemannSolution riemann_burgers(double uL, double uR);

// Closed-form entropy solution of the Burgers Riemann problem at xi = x/t.
double exact_riemann_burgers(double uL, double uR, double xi);

struct OracleOptions {
  bool require_zero_mean = true;
  double cfl = 0.4;
};

// First-order monotone finite-volume solve (local Lax-Friedrichs flux,
// forward Euler) on a grid refined `refine` times, cell-averaged back onto
// `grid`. Fine cells tile each coarse cell.
//
// The Field overload prolongs u0 piecewise constant; the profile overload
// samples the profile at the fine cell centers.
// Throws BlowUp if the discrete maximum principle is violated.
Field godunov_solve(const Field& u0, const FluxModel& model, const Grid1D& grid, double T,
                    std::size_t refine, const OracleOptions& options = {});
Field godunov_solve(const std::function<double(double)>& u0, const FluxModel& model,
                    const Grid1D& grid, double T, std::size_t refine,
                    const OracleOptions& options = {});

// Smooth periodic initial profile with its derivative, scanned over [lo, hi).
struct SmoothProfile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  double lo = -1.0;
  double hi = 1.0;
};

// Gradient blow-up time -1 / min_x d/dx f'(u0(x)); +inf if that derivative
// never goes negative.
double breaking_time(const SmoothProfile& u0, const FluxModel& model);

// Implicit solution u = u0(x - f'(u) t) of smooth data before breaking.
// Construction scans the profile once; evaluation is a bracketed Newton
// iteration with bisection fallback, residual <= 1e-12.
class CharacteristicSolution {
 public:
  CharacteristicSolution(SmoothProfile u0, FluxModel model);

  double breaking_time() const { return t_star_; }
  // Throws PreShockViolation when t >= breaking_time(), RootFindError if the
  // iteration stalls.
  double operator()(double x, double t) const;

 private:
  SmoothProfile u0_;
  FluxModel model_;
  double t_star_;
  double u_min_;
  double u_max_;
};

double characteristics_smooth(const SmoothProfile& u0, const FluxModel& model, double x,
                              double t);

}  // namespace vvlab
