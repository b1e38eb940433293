#include <cmath>
#include <numbers>

#include "doctest.h"
#include "vvlab/diagnostics.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/nonlocal.hpp"
#include "vvlab/reference.hpp"
#include "vvlab/solver.hpp"

using namespace vvlab;

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

Field sine2(const Grid1D& g) {
  return sample(g, [](double x) { return std::sin(kTwoPi * x); });
}

SolverOptions until(double T) {
  SolverOptions o;
  o.t_end = T;
  return o;
}

}  // namespace

TEST_CASE("semidiscrete_rhs: zero state is a fixed point") {
  const Grid1D g = make_grid(1.0, 16);
  State s{Field(16), Field(16), 0.0};
  for (const ParamSet& p : {ParamSet{}, ParamSet{0.1, 0.01, 0.2, 0.3}, ParamSet{0.1, 0.0, 0.0, 0.5}}) {
    const Rhs r = semidiscrete_rhs(s, p, FluxModel::quadratic(), g);
    CHECK(r.du.max_abs() == 0.0);
    if (r.dP) CHECK(r.dP->max_abs() == 0.0);
  }
}

TEST_CASE("semidiscrete_rhs: Lax-Friedrichs divided difference on a Riemann step") {
  // u = 1 on cells 0..3, -1 on 4..7; dx = 0.25.
  // Interior fluxes are f(+-1) = 1/2. At the 3|4 interface the Rusanov flux is
  // 1/2 - 1/2 * 1 * (-2) = 3/2; at the 7|0 seam it is 1/2 - 1/2 * 1 * 2 = -1/2.
  const Grid1D g = make_grid(1.0, 8);
  State s;
  s.u = Field(8);
  for (std::size_t i = 0; i < 8; ++i) s.u[i] = i < 4 ? 1.0 : -1.0;
  const Rhs r = semidiscrete_rhs(s, ParamSet{}, FluxModel::quadratic(), g);
  const double expect[8] = {-4.0, 0.0, 0.0, -4.0, 4.0, 0.0, 0.0, 4.0};
  for (std::size_t i = 0; i < 8; ++i) CHECK(r.du[i] == doctest::Approx(expect[i]));
}

TEST_CASE("semidiscrete_rhs: viscous term against the analytic eigenvalue") {
  const FluxModel zero = FluxModel::custom([](double) { return 0.0; }, [](double) { return 0.0; },
                                           "zero", [](double) { return 0.0; });
  auto err = [&](std::size_t N) {
    const Grid1D g = make_grid(1.0, N);
    State s;
    s.u = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
    const Rhs r = semidiscrete_rhs(s, ParamSet{0.99, 0.0, 0.0, 0.0}, zero, g);
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double exact = -0.99 * std::numbers::pi * std::numbers::pi * s.u[i];
      m = std::max(m, std::abs(r.du[i] - exact));
    }
    return m;
  };
  const double e1 = err(64), e2 = err(128);
  CHECK(e1 < 2e-2);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("semidiscrete_rhs: dispersion and rotation terms") {
  const Grid1D g = make_grid(1.0, 256);
  const FluxModel zero = FluxModel::custom([](double) { return 0.0; }, [](double) { return 0.0; },
                                           "zero", [](double) { return 0.0; });
  State s;
  s.u = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
  // +beta u_xxx = -beta pi^3 cos(pi x); +gamma P with P = -cos(pi x)/pi.
  const Rhs r = semidiscrete_rhs(s, ParamSet{0.0, 0.5, 0.0, 0.3}, zero, g);
  const double pi = std::numbers::pi;
  for (std::size_t i = 0; i < 256; i += 17) {
    const double c = std::cos(pi * g.x(i));
    CHECK(r.du[i] == doctest::Approx(-0.5 * pi * pi * pi * c - 0.3 * c / pi).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("stable_dt examples") {
  const Grid1D g = make_grid(1.0, 200);  // dx = 0.01
  State s;
  s.u = sample(g, [](double x) { return std::sin(std::numbers::pi * x); });
  const double umax = s.u.max_abs();
  SolverOptions o;
  CHECK(stable_dt(s, ParamSet{}, FluxModel::quadratic(), g, o) ==
        doctest::Approx(0.4 * 0.01 / umax).epsilon(1e-14));
  CHECK(stable_dt(s, ParamSet{0.01, 0.0, 0.0, 0.0}, FluxModel::quadratic(), g, o) ==
        doctest::Approx(2.5e-3).epsilon(1e-12));
  CHECK(stable_dt(s, ParamSet{0.0, 1e-4, 0.0, 0.0}, FluxModel::quadratic(), g, o) ==
        doctest::Approx(0.1 * 1e-6 / 1e-4).epsilon(1e-12));
  CHECK(stable_dt(s, ParamSet{0.0, 0.0, 0.05, 0.1}, FluxModel::quadratic(), g, o) ==
        doctest::Approx(0.4 * 0.05 * 0.01).epsilon(1e-12));
  State zero{Field(200), std::nullopt, 0.0};
  const double dt0 = stable_dt(zero, ParamSet{}, FluxModel::quadratic(), g, o);
  CHECK(std::isfinite(dt0));
  CHECK(dt0 > 0.0);
}

TEST_CASE("solve: zero data stays exactly zero") {
  const Grid1D g = make_grid(1.0, 32);
  for (const ParamSet& p : {ParamSet{}, ParamSet{0.1, 0.01, 0.1, 0.1}, ParamSet{0.05, 0.0, 0.0, 0.2}}) {
    const Trajectory t = solve(Field(32), p, FluxModel::quadratic(), g, until(1.0));
    CHECK(t.final().t == 1.0);
    CHECK(t.final().u.max_abs() == 0.0);
    CHECK(t.final().P->max_abs() == 0.0);
  }
}

TEST_CASE("solve: shock moves at the Rankine-Hugoniot speed") {
  // 1 on [-1/2, 0), 0 on [0, 1/2), -1/2 elsewhere: zero mean. The 1|0 shock
  // travels at 1/2 and meets no other wave before t = 2/3.
  const Grid1D g = make_grid(1.0, 1024);
  const Field u0 = sample(g, [](double x) {
    if (x >= -0.5 && x < 0.0) return 1.0;
    if (x >= 0.0 && x < 0.5) return 0.0;
    return -0.5;
  });
  REQUIRE(mean_u(u0, g) == 0.0);
  const double T = 0.3;
  const Field& u = solve(u0, ParamSet{}, FluxModel::quadratic(), g, until(T)).final().u;
  double front = NAN;
  for (std::size_t i = g.n_cells / 2; i + 1 < 3 * g.n_cells / 4; ++i) {
    if (u[i] >= 0.5 && u[i + 1] < 0.5) {
      front = g.x(i) + g.dx * (u[i] - 0.5) / (u[i] - u[i + 1]);
      break;
    }
  }
  CHECK(std::abs(front - 0.5 * T) <= 3.0 * g.dx);
}

TEST_CASE("solve: parabolic maximum principle and grid convergence") {
  ParamSet p{0.05, 0.0, 0.0, 0.0};
  const Grid1D g = make_grid(1.0, 256);
  const Field u0 = sine2(g);
  const Trajectory t = solve(u0, p, FluxModel::quadratic(), g, until(0.5));
  for (const auto& s : t.snapshots) CHECK(s.u.max_abs() <= u0.max_abs() + 1e-14);

  const Grid1D f = make_grid(1.0, 1024);
  const Trajectory tf = solve(sine2(f), p, FluxModel::quadratic(), f, until(0.5));
  Field restricted(256);
  for (std::size_t i = 0; i < 256; ++i) restricted[i] = tf.final().u[4 * i];
  CHECK(lp_distance(t.final().u, restricted, 1.0, g) < 0.02);
}

TEST_CASE("solve: mass conservation and energy dissipation") {
  const Grid1D g = make_grid(1.0, 128);
  ParamSet p{0.02, 0.0, 0.05, std::cbrt(0.02) * 0.05};
  SolverOptions o = until(0.5);
  o.snapshot_interval = 0.01;
  const Trajectory t = solve(sine2(g), p, FluxModel::quadratic(), g, o);
  const DiagSeries* mu = t.series("mean_u");
  const DiagSeries* mp = t.series("mean_P");
  const DiagSeries* e = t.series("energy");
  REQUIRE(mu);
  REQUIRE(mp);
  REQUIRE(e);
  for (double v : mu->values) CHECK(std::abs(v) <= 1e-10);
  for (double v : mp->values) CHECK(std::abs(v) <= 1e-10);
  for (std::size_t i = 1; i < e->size(); ++i) CHECK(e->values[i] <= e->values[i - 1] + 1e-12);
}

TEST_CASE("solve: first order against characteristics before breaking") {
  const SmoothProfile prof{[](double x) { return std::sin(kTwoPi * x); },
                           [](double x) { return kTwoPi * std::cos(kTwoPi * x); }, -1.0, 1.0};
  const CharacteristicSolution exact(prof, FluxModel::quadratic());
  const double T = 0.5 * exact.breaking_time();
  std::vector<double> err;
  for (std::size_t N : {128u, 256u, 512u}) {
    const Grid1D g = make_grid(1.0, N);
    const Trajectory t = solve(sample(g, prof.value), ParamSet{}, FluxModel::quadratic(), g, until(T));
    Field ref(N);
    for (std::size_t i = 0; i < N; ++i) ref[i] = exact(g.x(i), T);
    err.push_back(lp_distance(t.final().u, ref, 1.0, g));
  }
  CHECK(std::log2(err[0] / err[1]) >= 0.85);
  CHECK(std::log2(err[1] / err[2]) >= 0.85);
}

TEST_CASE("solve: snapshots are increasing, start at zero and land on the interval") {
  const Grid1D g = make_grid(1.0, 64);
  SolverOptions o = until(0.3);
  o.snapshot_interval = 0.05;
  const Trajectory t = solve(sine2(g), ParamSet{0.01, 0.0, 0.1, 0.01}, FluxModel::quadratic(), g, o);
  REQUIRE(t.snapshots.size() == 7);
  CHECK(t.initial().t == 0.0);
  for (std::size_t i = 0; i < t.snapshots.size(); ++i) {
    CHECK(t.snapshots[i].t == doctest::Approx(0.05 * static_cast<double>(i)).epsilon(1e-12));
    if (i) CHECK(t.snapshots[i].t > t.snapshots[i - 1].t);
  }

  SolverOptions s = until(0.1);
  s.snapshot_stride = 5;
  const Trajectory ts = solve(sine2(g), ParamSet{}, FluxModel::quadratic(), g, s);
  CHECK(ts.snapshots.size() == 1 + (ts.steps + 4) / 5);
  CHECK(ts.final().t == 0.1);
}

TEST_CASE("solve: deterministic to the bit") {
  const Grid1D g = make_grid(1.0, 128);
  ParamSet p{0.01, 1e-5, 0.02, 0.005};
  const Trajectory a = solve(sine2(g), p, FluxModel::cubic(), g, until(0.2));
  const Trajectory b = solve(sine2(g), p, FluxModel::cubic(), g, until(0.2));
  REQUIRE(a.snapshots.size() == b.snapshots.size());
  for (std::size_t k = 0; k < a.snapshots.size(); ++k) {
    CHECK(a.snapshots[k].u.values == b.snapshots[k].u.values);
    CHECK(a.snapshots[k].P->values == b.snapshots[k].P->values);
  }
}

TEST_CASE("solve: static and relaxed formulations") {
  const Grid1D g = make_grid(1.0, 64);
  const Trajectory st = solve(sine2(g), ParamSet{0.02, 0.0, 0.0, 0.3}, FluxModel::quadratic(), g,
                              until(0.2));
  // Static P is the exact primitive of u at every snapshot.
  for (const auto& s : st.snapshots) {
    const Field P = antiderivative(s.u, g);
    for (std::size_t i = 0; i < 64; ++i) CHECK((*s.P)[i] == doctest::Approx(P[i]).epsilon(1e-13).scale(1.0));
  }
  // Relaxed P with tiny delta stays close to the static one.
  const Trajectory rl = solve(sine2(g), ParamSet{0.02, 0.0, 1e-3, 0.3}, FluxModel::quadratic(), g,
                              until(0.2));
  CHECK(lp_distance(rl.final().u, st.final().u, 1.0, g) < 1e-3);
}

TEST_CASE("solve: error paths") {
  const Grid1D g = make_grid(1.0, 32);
  CHECK_THROWS_AS(solve(Field(std::vector<double>(32, 1.0), 0.0), ParamSet{}, FluxModel::quadratic(),
                        g, until(0.1)),
                  MeanViolation);

  Field bad = sine2(g);
  bad[3] = NAN;
  CHECK_THROWS_AS(solve(bad, ParamSet{}, FluxModel::quadratic(), g, until(0.1)), BlowUp);

  SolverOptions huge = until(1000.0);
  huge.fixed_dt = 5.0;
  CHECK_THROWS_AS(solve(sine2(g), ParamSet{0.5, 0.0, 0.0, 0.0}, FluxModel::quadratic(), g, huge),
                  BlowUp);

  SolverOptions capped = until(1.0);
  capped.max_steps = 3;
  try {
    (void)solve(sine2(g), ParamSet{}, FluxModel::quadratic(), g, capped);
    FAIL("expected IncompleteRun");
  } catch (const IncompleteRun& e) {
    CHECK(e.partial().steps == 3);
    CHECK(e.partial().final().t > 0.0);
    CHECK(e.partial().final().t < 1.0);
  }

  SolverOptions invalid = until(0.1);
  invalid.cfl_hyp = 1.5;
  CHECK_THROWS_AS(solve(sine2(g), ParamSet{}, FluxModel::quadratic(), g, invalid), InvalidParams);
}
