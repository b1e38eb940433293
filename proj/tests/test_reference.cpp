#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "vvlab/diagnostics.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/reference.hpp"

using namespace vvlab;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

SmoothProfile sine_profile(double amp = 1.0) {
  return {[amp](double x) { return amp * std::sin(kTwoPi * x); },
          [amp](double x) { return amp * kTwoPi * std::cos(kTwoPi * x); }, -1.0, 1.0};
}

// Riemann data on the torus: jump uL|uR at 0 and uR|uL at the seam.
double periodic_riemann(double uL, double uR, double x, double T) {
  const double y = x > 0.0 ? x - 1.0 : x + 1.0;
  if (std::abs(y) <= std::max(std::abs(uL), std::abs(uR)) * T) {
    return exact_riemann_burgers(uR, uL, y / T);
  }
  return exact_riemann_burgers(uL, uR, x / T);
}

Field riemann_cells(const Grid1D& g, double uL, double uR) {
  const std::size_t N = g.n_cells;
  Field u0(N);
  for (std::size_t i = 0; i < N; ++i) {
    u0[i] = (i == 0 || i == N / 2) ? 0.5 * (uL + uR) : (g.x(i) < 0.0 ? uL : uR);
  }
  return u0;
}

}  // namespace

TEST_CASE("riemann_burgers: shock, rarefaction and constant states") {
  const RiemannSolution s = riemann_burgers(1.0, 0.0);
  CHECK(s.wave == RiemannSolution::Wave::Shock);
  CHECK(s.speed == 0.5);
  CHECK(s.at(0.49) == 1.0);
  CHECK(s.at(0.51) == 0.0);

  const RiemannSolution r = riemann_burgers(-1.0, 1.0);
  CHECK(r.wave == RiemannSolution::Wave::Rarefaction);
  CHECK(r.at(-2.0) == -1.0);
  CHECK(r.at(0.3) == 0.3);
  CHECK(r.at(2.0) == 1.0);
  CHECK(r(0.2, 0.5) == doctest::Approx(0.4));

  CHECK(riemann_burgers(0.7, 0.7).wave == RiemannSolution::Wave::Constant);
  CHECK(exact_riemann_burgers(0.7, 0.7, -3.0) == 0.7);
  CHECK(exact_riemann_burgers(1.0, -1.0, -1e-9) == 1.0);
  CHECK(exact_riemann_burgers(1.0, -1.0, 1e-9) == -1.0);
}

TEST_CASE("riemann_burgers: shock speed obeys Rankine-Hugoniot") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> pick(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    double a = pick(rng), b = pick(rng);
    if (a < b) std::swap(a, b);
    if (a == b) continue;
    const RiemannSolution s = riemann_burgers(a, b);
    const FluxModel f = FluxModel::quadratic();
    CHECK(s.speed == doctest::Approx((f.f(a) - f.f(b)) / (a - b)));
  }
}

TEST_CASE("godunov_solve: zero data and a stationary shock") {
  const Grid1D g = make_grid(1.0, 64);
  CHECK(godunov_solve(Field(64), FluxModel::quadratic(), g, 1.0, 4).max_abs() == 0.0);

  // 1|-1 at x = 0 and -1|1 at the seam: the shock stays put, the seam fan opens.
  OracleOptions opt;
  opt.require_zero_mean = false;
  const Field u0 = riemann_cells(g, 1.0, -1.0);
  const Field uT = godunov_solve(u0, FluxModel::quadratic(), g, 0.25, 2, opt);
  for (std::size_t i = 14; i < 26; ++i) CHECK(uT[i] == doctest::Approx(1.0).epsilon(1e-4));
  for (std::size_t i = 38; i < 50; ++i) CHECK(uT[i] == doctest::Approx(-1.0).epsilon(1e-4));
  CHECK(uT[32] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("godunov_solve: convergence to the periodic Riemann solution") {
  OracleOptions opt;
  opt.require_zero_mean = false;
  for (auto [uL, uR] : {std::pair{1.0, 0.0}, std::pair{-1.0, 1.0}}) {
    std::vector<double> errs;
    for (std::size_t N : {256u, 512u, 1024u}) {
      const Grid1D g = make_grid(1.0, N);
      const Field uT = godunov_solve(riemann_cells(g, uL, uR), FluxModel::quadratic(), g, 0.5, 1, opt);
      Field exact(N);
      for (std::size_t i = 0; i < N; ++i) exact[i] = periodic_riemann(uL, uR, g.x(i), 0.5);
      errs.push_back(lp_distance(uT, exact, 1.0, g));
    }
    CHECK(std::log2(errs[0] / errs[2]) / 2.0 >= 0.7);
  }
}

TEST_CASE("godunov_solve: refinement agrees with itself") {
  // The coarse grid cell averages of the refined solves settle as refine grows.
  const Grid1D g = make_grid(1.0, 64);
  auto u0 = [](double x) { return std::sin(kTwoPi * x); };
  const Field a = godunov_solve(u0, FluxModel::quadratic(), g, 0.3, 4);
  const Field b = godunov_solve(u0, FluxModel::quadratic(), g, 0.3, 8);
  const Field c = godunov_solve(u0, FluxModel::quadratic(), g, 0.3, 16);
  const double d1 = lp_distance(a, b, 1.0, g);
  const double d2 = lp_distance(b, c, 1.0, g);
  CHECK(d2 < d1);
  CHECK(d2 < 0.02);
}

TEST_CASE("godunov_solve: first order before breaking") {
  const CharacteristicSolution exact(sine_profile(), FluxModel::quadratic());
  const double T = 0.5 * exact.breaking_time();
  for (std::size_t N : {256u, 512u}) {
    const Grid1D g = make_grid(1.0, N);
    const Field uT = godunov_solve(sine_profile().value, FluxModel::quadratic(), g, T, 1);
    Field ref(N);
    for (std::size_t i = 0; i < N; ++i) ref[i] = exact(g.x(i), T);
    CHECK(lp_distance(uT, ref, 1.0, g) <= 5.0 * g.dx);
  }
}

TEST_CASE("godunov_solve: maximum principle and conservation on random data") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> pick(-1.0, 1.0);
  const Grid1D g = make_grid(1.0, 128);
  for (int trial = 0; trial < 5; ++trial) {
    Field u0(128);
    for (std::size_t i = 0; i < 128; ++i) u0[i] = pick(rng);
    double m = 0.0;
    for (double v : u0.values) m += v;
    m /= 128.0;
    for (double& v : u0.values) v -= m;
    const FluxModel model = trial % 2 ? FluxModel::cubic() : FluxModel::quadratic();
    const Field uT = godunov_solve(u0, model, g, 0.4, 2);
    double lo = 1e300, hi = -1e300;
    for (double v : u0.values) lo = std::min(lo, v), hi = std::max(hi, v);
    for (double v : uT.values) {
      CHECK(v >= lo - 1e-14);
      CHECK(v <= hi + 1e-14);
    }
    CHECK(std::abs(mean_u(uT, g) - mean_u(u0, g)) <= 1e-13);
  }
}

TEST_CASE("godunov_solve: rejects data with nonzero mean by default") {
  const Grid1D g = make_grid(1.0, 32);
  CHECK_THROWS_AS(godunov_solve(Field(std::vector<double>(32, 0.5), 0.0), FluxModel::quadratic(), g,
                                0.1, 2),
                  MeanViolation);
}

TEST_CASE("characteristics: identity at t = 0 and breaking time") {
  const CharacteristicSolution sol(sine_profile(), FluxModel::quadratic());
  for (double x : {-0.9, -0.3, 0.0, 0.2, 0.77}) {
    CHECK(sol(x, 0.0) == doctest::Approx(std::sin(kTwoPi * x)).epsilon(1e-14));
  }
  CHECK(sol.breaking_time() == doctest::Approx(1.0 / kTwoPi).epsilon(1e-9));
  CHECK(breaking_time(sine_profile(), FluxModel::quadratic()) ==
        doctest::Approx(1.0 / kTwoPi).epsilon(1e-9));

  // The gradient steepens as 1/(1 + f''(u) u0' t) along the steepest characteristic.
  const double t = 0.9 * sol.breaking_time();
  const double h = 1e-6;
  const double slope = (sol(0.5 + h, t) - sol(0.5 - h, t)) / (2.0 * h);
  CHECK(slope == doctest::Approx(-kTwoPi / (1.0 - kTwoPi * t)).epsilon(1e-4));
}

TEST_CASE("characteristics: cubic flux, zero data and post-breaking requests") {
  // f'(u) = -u^2/2; d/dx f'(u0) = -u0 u0' = -pi sin(4 pi x) at its most negative is -pi.
  CHECK(breaking_time(sine_profile(), FluxModel::cubic()) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-9));

  const SmoothProfile zero{[](double) { return 0.0; }, [](double) { return 0.0; }, -1.0, 1.0};
  CHECK(std::isinf(breaking_time(zero, FluxModel::quadratic())));
  const CharacteristicSolution flat(zero, FluxModel::quadratic());
  CHECK(flat(0.3, 100.0) == 0.0);

  const CharacteristicSolution sol(sine_profile(), FluxModel::quadratic());
  CHECK_THROWS_AS(sol(0.0, 1.01 * sol.breaking_time()), PreShockViolation);
  CHECK_THROWS_AS(characteristics_smooth(sine_profile(), FluxModel::quadratic(), 0.0, 0.2),
                  PreShockViolation);
}

TEST_CASE("characteristics: implicit relation holds to round-off") {
  for (const FluxModel& model : {FluxModel::quadratic(), FluxModel::cubic()}) {
    const SmoothProfile p = sine_profile(0.8);
    const CharacteristicSolution sol(p, model);
    const double t = 0.95 * sol.breaking_time();
    for (int i = 0; i < 200; ++i) {
      const double x = -1.0 + 2.0 * i / 200.0;
      const double u = sol(x, t);
      CHECK(std::abs(u - p.value(x - model.df(u) * t)) <= 1e-12);
    }
  }
}
