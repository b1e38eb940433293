#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "doctest.h"
#include "vvlab/errors.hpp"
#include "vvlab/io.hpp"

using namespace vvlab;

TEST_CASE("format_double round-trips every double") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> pick(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double v = pick(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(std::strtod(io::format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
        std::numeric_limits<double>::denorm_min());
}

TEST_CASE("trajectory files round-trip bit for bit") {
  const Grid1D g = make_grid(1.5, 32);
  SolverOptions o;
  o.t_end = 0.2;
  o.snapshot_interval = 0.05;
  const Trajectory t =
      solve(sample(g, [](double x) { return std::sin(std::numbers::pi * x / 1.5); }),
            ParamSet{0.01, 1e-4, 0.02, 0.03}, FluxModel::cubic(), g, o);
  std::stringstream ss;
  io::write_trajectory(ss, t);
  const Trajectory back = io::read_trajectory(ss);
  CHECK(back.params == t.params);
  CHECK(back.grid.n_cells == 32);
  CHECK(back.grid.half_width == 1.5);
  CHECK(back.model.kind() == FluxKind::Cubic);
  CHECK(back.steps == t.steps);
  CHECK(back.options.snapshot_interval == 0.05);
  REQUIRE(back.snapshots.size() == t.snapshots.size());
  for (std::size_t k = 0; k < t.snapshots.size(); ++k) {
    CHECK(back.snapshots[k].t == t.snapshots[k].t);
    CHECK(back.snapshots[k].u.values == t.snapshots[k].u.values);
    CHECK(back.snapshots[k].P->values == t.snapshots[k].P->values);
  }
  REQUIRE(back.series("energy"));
  CHECK(back.series("energy")->values == t.series("energy")->values);
}

TEST_CASE("trajectory reader reports missing or malformed content") {
  std::stringstream empty("eps=0\n");
  CHECK_THROWS_AS(io::read_trajectory(empty), ConfigError);

  std::stringstream bad("eps=0\nbeta=0\n# t=0\n-1,0\n");
  CHECK_THROWS_AS(io::read_trajectory(bad), ConfigError);

  std::stringstream noheader("# t=0\n-1,0,0\n");
  try {
    (void)io::read_trajectory(noheader);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "eps");
  }
}

TEST_CASE("series CSV round-trip") {
  std::vector<DiagSeries> s{{"a", {0.0, 0.1}, {1.0 / 3.0, -2.5e-300}, std::nullopt},
                            {"b", {0.0}, {std::numbers::pi}, std::nullopt}};
  std::stringstream ss;
  io::write_series_csv(ss, s);
  const auto back = io::read_series_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[0].name == "a");
  CHECK(back[0].times == s[0].times);
  CHECK(back[0].values == s[0].values);
  CHECK(back[1].values == s[1].values);

  std::stringstream bad("name,time,value\nx;1;2\n");
  CHECK_THROWS_AS(io::read_series_csv(bad), ConfigError);
}

TEST_CASE("sweep CSV and rates JSON layout") {
  SweepResult r;
  r.norms = {1.0, INFINITY};
  SweepCell ok;
  ok.k = 0;
  ok.params = ParamSet{0.1, 0.0, 0.1, 0.05};
  ok.ok = true;
  ok.distances = {0.25, 0.5};
  ok.entropy_floor = -1e-9;
  BoundReport br;
  br.id = BoundId::Energy;
  br.pass = true;
  ok.bounds = {br};
  SweepCell bad;
  bad.k = 1;
  bad.params = ParamSet{0.05, 0.0, 0.05, 0.01};
  bad.error = "boom";
  r.cells = {ok, bad};
  r.rates = {RateFit{0.5, 1.0, 0.99}, std::nullopt};

  std::ostringstream os;
  io::write_sweep_csv(os, r);
  std::istringstream is(os.str());
  std::string header, row0, row1;
  std::getline(is, header);
  std::getline(is, row0);
  std::getline(is, row1);
  CHECK(header.rfind("k,eps,beta,delta,gamma,d_L1,d_Linf,entropy_floor,status,bound_u_linf,bound_energy", 0) == 0);
  CHECK(row0.rfind("0,0.10000000000000001,0,0.10000000000000001,0.050000000000000003,0.25,0.5,-1.0000000000000001e-09,ok,NA,1", 0) == 0);
  CHECK(row1.find(",NA,NA,NA,failed,") != std::string::npos);

  const auto j = io::rates_json(r);
  CHECK(j["L1"]["slope"] == 0.5);
  CHECK(j["L1"]["r2"] == 0.99);
  CHECK(j["Linf"]["error"] == "insufficient-data");
  CHECK(io::norm_label(2.0) == "L2");
}

TEST_CASE("bound reports serialize every field") {
  BoundReport r;
  r.id = BoundId::PxL2;
  r.scaling_expr = "s";
  r.scaling = 2.0;
  r.measured = 1.0;
  r.fitted_constant = 0.5;
  r.cap = 10.0;
  r.pass = true;
  const auto j = io::to_json(r);
  CHECK(j["id"] == "px_l2");
  CHECK(j["fitted_constant"] == 0.5);
  CHECK(j["pass"] == true);
  CHECK(io::to_json(std::span<const BoundReport>(&r, 1)).size() == 1);
}
