#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vvlab/model.hpp"
#include "vvlab/series.hpp"
#include "vvlab/solver.hpp"

namespace vvlab {

// Riemann sums; exact quadrature of trigonometric polynomials on the periodic grid.
double mean_u(const Field& u, const Grid1D& grid);
double mean_P(const Field& P, const Grid1D& grid);
double l2_norm_sq(const Field& w, const Grid1D& grid);

// ||u||^2 + delta*gamma*||P||^2.
double weighted_energy(const Field& u, const Field& P, double delta, double gamma,
                       const Grid1D& grid);

// Per-snapshot series attached to every trajectory: mean_u, mean_P, energy,
// u_linf, grad_l2sq (||D1 u||^2).
std::vector<DiagSeries> snapshot_series(const Trajectory& traj);

// r_n = (E(t_{n+1}) - E(t_n)) / (t_{n+1} - t_n) + 2 eps ||D1 u(t_n)||^2 over
// consecutive snapshots. Only valid without dispersion: throws
// InapplicableIdentity when beta != 0.
DiagSeries energy_balance_residual(const Trajectory& traj);

// phi(t, x) = amplitude * b((t - tc)/wt) * b(dist(x, xc)/wx), b(r) = (1 - r^2)^3
// on |r| < 1 and 0 outside. The space distance is periodic.
struct TestFunction {
  double t_center = 0.0;
  double t_half_width = 1.0;
  double x_center = 0.0;
  double x_half_width = 1.0;
  double amplitude = 1.0;

  double value(double t, double x, double period) const;
  double d_t(double t, double x, double period) const;
  double d_x(double t, double x, double period) const;
};

// n_t x n_x bumps whose supports tile [t_lo, t_hi] x [x_lo, x_hi] with 50% overlap.
std::vector<TestFunction> test_function_lattice(double t_lo, double t_hi, std::size_t n_t,
                                                double x_lo, double x_hi, std::size_t n_x);

struct EntropyResidual {
  double worst = 0.0;             // min over the test functions
  std::size_t worst_index = 0;
  std::vector<double> values;     // one per test function
  bool coarse_snapshots = false;  // snapshot spacing exceeds dx somewhere
};

// Weak entropy residual
//   int int [eta(u) phi_t + q(u) phi_x + gamma eta'(u) P phi] + int eta(u0) phi(0, .)
// by trapezoid in time over snapshots and Riemann sums in space. Entropy
// solutions give values >= 0 up to quadrature error.
// Throws InvalidTestFunction for negative amplitude, nonpositive widths or a
// support that extends past the final snapshot time.
EntropyResidual entropy_residual(const Trajectory& traj, const EntropyPair& pair,
                                 std::span<const TestFunction> phis);

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

// (sum over nodes in [lo, hi) of |a - b|^p dx)^(1/p); p = inf gives the max.
// Throws EmptyWindow if no node falls in the window.
double lp_distance(const Field& a, const Field& b, double p, const Grid1D& grid,
                   std::optional<Window> window = std::nullopt);

enum class BoundId {
  UInfinity,            // ||u||_inf <= ||u0||_inf + C(T)
  Energy,               // ||u||^2 + delta gamma ||P||^2 <= C0
  PTimeL2,              // ||P||_{L2((0,T) x R)} <= C(T) / sqrt(delta gamma)
  PxL2,                 // ||P_x||_2 <= C(T) / (delta sqrt(eps))
  PInfinity,            // ||P||_inf <= C(T) / (delta^3/4 gamma^1/4 eps^1/4)
  UInfinityDispersive,  // ||u||_inf <= C(T) beta^(-1/3)
  UL6,                  // ||u||_6 <= C(T)
  Interpolation,        // ||P||_inf^2 <= ||P||_2 ||P_x||_2
};

std::string to_string(BoundId id);
BoundId bound_from_string(const std::string& name);
const std::vector<BoundId>& all_bounds();

struct BoundReport {
  BoundId id = BoundId::UInfinity;
  std::string scaling_expr;
  double scaling = 0.0;
  double measured = 0.0;
  double fitted_constant = 0.0;  // measured / scaling
  double cap = 0.0;
  bool pass = false;             // measured <= cap * scaling
};

double default_cap(BoundId id);
bool bound_applicable(BoundId id, const Trajectory& traj);

// Throws InapplicableIdentity when the bound does not apply to the run's regime.
BoundReport bound_monitor(const Trajectory& traj, BoundId id,
                          std::optional<double> cap = std::nullopt);

// Every applicable bound with default caps.
std::vector<BoundReport> monitor_all(const Trajectory& traj);

}  // namespace vvlab
