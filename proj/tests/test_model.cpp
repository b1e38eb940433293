#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "vvlab/errors.hpp"
#include "vvlab/model.hpp"

using namespace vvlab;

TEST_CASE("make_grid: uniform periodic mesh") {
  const Grid1D g = make_grid(1.0, 8);
  CHECK(g.dx == 0.25);
  CHECK(g.x(0) == -1.0);
  CHECK(g.x(7) == 0.75);
  CHECK(g.nodes().size() == 8);

  const Grid1D h = make_grid(std::numbers::pi, 256);
  CHECK(h.dx == doctest::Approx(2.0 * std::numbers::pi / 256.0).epsilon(1e-15));
  CHECK(std::abs(h.dx * 256.0 - 2.0 * std::numbers::pi) <=
        2.0 * std::numbers::pi * std::numeric_limits<double>::epsilon());
}

TEST_CASE("make_grid: rejects odd, small and degenerate grids") {
  CHECK_THROWS_AS(make_grid(1.0, 7), InvalidGrid);
  CHECK_THROWS_AS(make_grid(1.0, 6), InvalidGrid);
  CHECK_THROWS_AS(make_grid(0.0, 16), InvalidGrid);
  CHECK_THROWS_AS(make_grid(-1.0, 16), InvalidGrid);
}

TEST_CASE("eval_flux: quadratic and cubic families") {
  CHECK(eval_flux(FluxModel::quadratic(), 2.0) == 2.0);
  CHECK(eval_flux(FluxModel::cubic(), 2.0) == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
  CHECK(eval_flux(FluxModel::quadratic(), 0.0) == 0.0);
  CHECK(eval_flux(FluxModel::cubic(), 0.0) == 0.0);
  CHECK(FluxModel::quadratic().df(-1.5) == -1.5);
  CHECK(FluxModel::cubic().df(2.0) == -2.0);
}

TEST_CASE("flux derivative matches central differences") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  const FluxModel sine = FluxModel::custom([](double u) { return std::sin(u); },
                                           [](double u) { return std::cos(u); }, "sin");
  for (const FluxModel& m : {FluxModel::quadratic(), FluxModel::cubic(), sine}) {
    for (int i = 0; i < 100; ++i) {
      const double u = pick(rng);
      const double h = 1e-3;
      const double fd = (m.f(u + h) - m.f(u - h)) / (2.0 * h);
      // |f'''| <= 1 for all three, so the truncation error is below h^2/6.
      CHECK(std::abs(fd - m.df(u)) <= h * h / 6.0 + 1e-10);
    }
  }
}

TEST_CASE("second derivative and max speed") {
  CHECK(FluxModel::quadratic().d2f(0.3) == 1.0);
  CHECK(FluxModel::cubic().d2f(0.3) == doctest::Approx(-0.3));
  const FluxModel sine = FluxModel::custom([](double u) { return std::sin(u); },
                                           [](double u) { return std::cos(u); }, "sin");
  CHECK(sine.d2f(0.4) == doctest::Approx(-std::sin(0.4)).epsilon(1e-6));
  CHECK(FluxModel::quadratic().max_speed(-2.0, 1.0) == 2.0);
  // |f'| = u^2/2 peaks at the endpoint of largest modulus.
  CHECK(FluxModel::cubic().max_speed(-1.0, 3.0) == 4.5);
  CHECK(FluxModel::cubic().max_speed(-0.5, 0.5) == 0.125);
}

TEST_CASE("ParamSet validation and formulation dispatch") {
  CHECK_NOTHROW(ParamSet{0.1, 0.0, 0.0, 0.5}.validate());
  CHECK_THROWS_AS((ParamSet{1.0, 0.0, 0.0, 0.0}.validate()), InvalidParams);
  CHECK_THROWS_AS((ParamSet{0.1, -0.1, 0.0, 0.0}.validate()), InvalidParams);
  CHECK_THROWS_AS((ParamSet{0.1, 0.0, std::nan(""), 0.0}.validate()), InvalidParams);
  CHECK_FALSE(ParamSet{0.1, 0.0, 0.0, 0.1}.relaxed());
  CHECK(ParamSet{0.1, 0.0, 0.01, 0.1}.relaxed());
}

TEST_CASE("Field helpers") {
  Field f(std::vector<double>{1.0, -3.0, 2.0}, 0.5);
  CHECK(f.max_abs() == 3.0);
  CHECK(f.all_finite());
  f[1] = std::numeric_limits<double>::quiet_NaN();
  CHECK_FALSE(f.all_finite());
}

TEST_CASE("square entropy: q(u) = u^3/3 for the quadratic flux") {
  const auto pair = make_entropy_pair(FluxModel::quadratic(), EntropyFamily::Square);
  for (double u : {-2.0, -0.7, 0.0, 0.3, 1.0, 2.5}) {
    CHECK(pair.eta(u) == doctest::Approx(0.5 * u * u));
    CHECK(pair.q(u) == doctest::Approx(u * u * u / 3.0).epsilon(1e-12));
  }
  // Independent composite Simpson check of the same integral.
  const double u = 1.7;
  const int M = 2000;
  double s = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double x = u * j / M;
    s += (j == 0 || j == M ? 1.0 : (j % 2 ? 4.0 : 2.0)) * x * x;
  }
  CHECK(pair.q(u) == doctest::Approx(s * u / (3.0 * M)).epsilon(1e-12));
}

TEST_CASE("smoothed Kruzkov entropy flux against its closed form") {
  // For f = u^2/2 and k = 0: q(u) = [x/2 sqrt(x^2+k^2) - k^2/2 asinh(x/k)] from 0 to u.
  for (double kappa : {0.3, 0.05, 1e-3}) {
    const auto pair = make_entropy_pair(FluxModel::quadratic(), EntropyFamily::SmoothedKruzkov,
                                        0.0, kappa);
    for (double u : {-1.5, -0.2, 0.01, 0.4, 2.0}) {
      const double exact =
          0.5 * u * std::sqrt(u * u + kappa * kappa) - 0.5 * kappa * kappa * std::asinh(u / kappa);
      CHECK(pair.q(u) == doctest::Approx(exact).epsilon(1e-10));
    }
  }
  const auto sharp =
      make_entropy_pair(FluxModel::quadratic(), EntropyFamily::SmoothedKruzkov, 0.0, 1e-3);
  for (double u : {-1.0, -0.5, 0.5, 1.0}) {
    CHECK(sharp.q(u) == doctest::Approx(std::copysign(0.5 * u * u, u)).epsilon(1e-5));
  }
}

TEST_CASE("entropy pairs: normalization, compatibility and convexity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pick(-3.0, 3.0);
  for (const FluxModel& m : {FluxModel::quadratic(), FluxModel::cubic()}) {
    for (const auto& pair :
         {make_entropy_pair(m, EntropyFamily::Square),
          make_entropy_pair(m, EntropyFamily::SmoothedKruzkov, 0.4, 0.1),
          make_entropy_pair(m, EntropyFamily::SmoothedKruzkov, -1.0, 0.05)}) {
      CHECK(pair.q(0.0) == 0.0);
      for (int i = 0; i < 100; ++i) {
        const double u = pick(rng);
        const double h = 1e-4;
        const double dq = (pair.q(u + h) - pair.q(u - h)) / (2.0 * h);
        CHECK(dq == doctest::Approx(m.df(u) * pair.deta(u)).epsilon(1e-6).scale(1.0));
      }
      for (int i = 0; i < 1000; ++i) CHECK(pair.d2eta(-3.0 + 6.0 * i / 999.0) >= -1e-12);
    }
  }
}

TEST_CASE("entropy pairs: q difference equals the integral of f' eta'") {
  const auto pair =
      make_entropy_pair(FluxModel::cubic(), EntropyFamily::SmoothedKruzkov, 0.25, 0.05);
  const double a = -0.8, b = 1.3;
  const int M = 20000;
  double s = 0.0;
  for (int j = 0; j <= M; ++j) {
    const double x = a + (b - a) * j / M;
    const double w = (j == 0 || j == M) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    s += w * FluxModel::cubic().df(x) * pair.deta(x);
  }
  s *= (b - a) / (3.0 * M);
  CHECK(pair.q(b) - pair.q(a) == doctest::Approx(s).epsilon(1e-9));
}

TEST_CASE("make_entropy_pair rejects nonpositive smoothing") {
  CHECK_THROWS_AS(make_entropy_pair(FluxModel::quadratic(), EntropyFamily::SmoothedKruzkov, 0.0, 0.0),
                  InvalidEntropy);
  CHECK_THROWS_AS(
      make_entropy_pair(FluxModel::quadratic(), EntropyFamily::SmoothedKruzkov, 0.0, -1.0),
      InvalidEntropy);
}
