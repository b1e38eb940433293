#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <limits>

#include "vvlab/diagnostics.hpp"
#include "vvlab/harness.hpp"
#include "vvlab/nonlocal.hpp"
#include "vvlab/reference.hpp"
#include "vvlab/solver.hpp"

namespace py = pybind11;
using namespace vvlab;

namespace {

py::array_t<double> to_array(const Field& f) {
  return py::array_t<double>(static_cast<py::ssize_t>(f.size()), f.values.data());
}

Field to_field(const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
               const Grid1D& grid, double t = 0.0) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != grid.n_cells) {
    throw InvalidGrid("array length must equal grid.n_cells");
  }
  return Field(std::vector<double>(a.data(), a.data() + a.shape(0)), t);
}

FluxModel flux_named(const std::string& name) {
  if (name == "quadratic") return FluxModel::quadratic();
  if (name == "cubic") return FluxModel::cubic();
  throw InvalidParams("flux must be 'quadratic' or 'cubic'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Regularized Ostrovsky-Hunter / short-pulse solvers and diagnostics";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<InvalidGrid>(m, "InvalidGrid", base.ptr());
  py::register_exception<InvalidParams>(m, "InvalidParams", base.ptr());
  py::register_exception<MeanViolation>(m, "MeanViolation", base.ptr());
  py::register_exception<BlowUp>(m, "BlowUp", base.ptr());
  py::register_exception<PreShockViolation>(m, "PreShockViolation", base.ptr());
  py::register_exception<RegimeOverflow>(m, "RegimeOverflow", base.ptr());
  py::register_exception<InsufficientData>(m, "InsufficientData", base.ptr());
  py::register_exception<EmptyWindow>(m, "EmptyWindow", base.ptr());

  py::class_<Grid1D>(m, "Grid1D")
      .def_readonly("half_width", &Grid1D::half_width)
      .def_readonly("n_cells", &Grid1D::n_cells)
      .def_readonly("dx", &Grid1D::dx)
      .def("nodes", [](const Grid1D& g) {
        const auto x = g.nodes();
        return py::array_t<double>(static_cast<py::ssize_t>(x.size()), x.data());
      })
      .def("__repr__", [](const Grid1D& g) {
        return "Grid1D(L=" + std::to_string(g.half_width) + ", N=" + std::to_string(g.n_cells) + ")";
      });
  m.def("make_grid", &make_grid, py::arg("half_width"), py::arg("n_cells"));

  py::class_<ParamSet>(m, "ParamSet")
      .def(py::init([](double eps, double beta, double delta, double gamma) {
             ParamSet p{eps, beta, delta, gamma};
             p.validate();
             return p;
           }),
           py::arg("eps") = 0.0, py::arg("beta") = 0.0, py::arg("delta") = 0.0,
           py::arg("gamma") = 0.0)
      .def_readonly("eps", &ParamSet::eps)
      .def_readonly("beta", &ParamSet::beta)
      .def_readonly("delta", &ParamSet::delta)
      .def_readonly("gamma", &ParamSet::gamma)
      .def("__eq__", [](const ParamSet& a, const ParamSet& b) { return a == b; });

  m.def("antiderivative",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> u, const Grid1D& g) {
          return to_array(antiderivative(to_field(u, g), g));
        },
        py::arg("u"), py::arg("grid"));
  m.def("derivative",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> u, const Grid1D& g) {
          return to_array(derivative(to_field(u, g), g));
        },
        py::arg("u"), py::arg("grid"));

  m.def("weighted_energy",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> u,
           py::array_t<double, py::array::c_style | py::array::forcecast> P, double delta,
           double gamma, const Grid1D& g) {
          return weighted_energy(to_field(u, g), to_field(P, g), delta, gamma, g);
        },
        py::arg("u"), py::arg("P"), py::arg("delta"), py::arg("gamma"), py::arg("grid"));

  m.def("lp_distance",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> a,
           py::array_t<double, py::array::c_style | py::array::forcecast> b, double p,
           const Grid1D& g, std::optional<std::pair<double, double>> window) {
          std::optional<Window> w;
          if (window) w = Window{window->first, window->second};
          return lp_distance(to_field(a, g), to_field(b, g), p, g, w);
        },
        py::arg("a"), py::arg("b"), py::arg("p"), py::arg("grid"),
        py::arg("window") = py::none());

  // Returns (times, u snapshots [n_snap x N], P snapshots, steps).
  m.def("solve",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> u0, const ParamSet& p,
           const Grid1D& g, double t_end, const std::string& flux, double snapshot_interval,
           bool central) {
          SolverOptions opt;
          opt.t_end = t_end;
          opt.snapshot_interval = snapshot_interval;
          if (snapshot_interval <= 0.0) opt.snapshot_stride = std::numeric_limits<std::size_t>::max();
          if (central) opt.limiter = Limiter::None;
          Trajectory traj;
          const Field f0 = to_field(u0, g);
          {
            py::gil_scoped_release release;
            traj = solve(f0, p, flux_named(flux), g, opt);
          }
          const auto n = static_cast<py::ssize_t>(traj.snapshots.size());
          const auto N = static_cast<py::ssize_t>(g.n_cells);
          py::array_t<double> times(n), us({n, N}), Ps({n, N});
          auto tt = times.mutable_unchecked<1>();
          auto uu = us.mutable_unchecked<2>();
          auto pp = Ps.mutable_unchecked<2>();
          for (py::ssize_t s = 0; s < n; ++s) {
            const auto& st = traj.snapshots[static_cast<std::size_t>(s)];
            tt(s) = st.t;
            for (py::ssize_t i = 0; i < N; ++i) {
              uu(s, i) = st.u[static_cast<std::size_t>(i)];
              pp(s, i) = st.P ? (*st.P)[static_cast<std::size_t>(i)] : 0.0;
            }
          }
          return py::make_tuple(times, us, Ps, traj.steps);
        },
        py::arg("u0"), py::arg("params"), py::arg("grid"), py::arg("t_end"),
        py::arg("flux") = "quadratic", py::arg("snapshot_interval") = 0.0,
        py::arg("central") = false);

  m.def("godunov_solve",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> u0, const Grid1D& g,
           double T, std::size_t refine, const std::string& flux, bool require_zero_mean) {
          OracleOptions opt;
          opt.require_zero_mean = require_zero_mean;
          return to_array(godunov_solve(to_field(u0, g), flux_named(flux), g, T, refine, opt));
        },
        py::arg("u0"), py::arg("grid"), py::arg("T"), py::arg("refine") = 8,
        py::arg("flux") = "quadratic", py::arg("require_zero_mean") = true);

  m.def("exact_riemann_burgers", &exact_riemann_burgers, py::arg("uL"), py::arg("uR"),
        py::arg("xi"));

  m.def("breaking_time",
        [](std::function<double(double)> u0, std::function<double(double)> du0, double lo,
           double hi, const std::string& flux) {
          return breaking_time(SmoothProfile{u0, du0, lo, hi}, flux_named(flux));
        },
        py::arg("u0"), py::arg("du0"), py::arg("lo"), py::arg("hi"),
        py::arg("flux") = "quadratic");

  m.def("characteristics",
        [](std::function<double(double)> u0, std::function<double(double)> du0, double lo,
           double hi, py::array_t<double, py::array::c_style | py::array::forcecast> x, double t,
           const std::string& flux) {
          const CharacteristicSolution sol(SmoothProfile{u0, du0, lo, hi}, flux_named(flux));
          py::array_t<double> out(x.shape(0));
          auto o = out.mutable_unchecked<1>();
          for (py::ssize_t i = 0; i < x.shape(0); ++i) o(i) = sol(x.data()[i], t);
          return out;
        },
        py::arg("u0"), py::arg("du0"), py::arg("lo"), py::arg("hi"), py::arg("x"), py::arg("t"),
        py::arg("flux") = "quadratic");

  m.def("regime_sequence",
        [](const std::string& kind, double eps0, double delta0, int k_max, double c_gamma,
           double c_beta, double theta) {
          Regime r{regime_kind_from_string(kind), eps0, delta0, c_gamma, c_beta, theta, k_max};
          return regime_sequence(r);
        },
        py::arg("kind"), py::arg("eps0") = 0.05, py::arg("delta0") = 0.05, py::arg("k_max") = 4,
        py::arg("c_gamma") = 1.0, py::arg("c_beta") = 1.0, py::arg("theta") = 0.5);

  m.def("fit_rate",
        [](const std::vector<double>& d, const std::vector<double>& eps) {
          const RateFit f = fit_rate(d, eps);
          return py::dict(py::arg("slope") = f.slope, py::arg("intercept") = f.intercept,
                          py::arg("r2") = f.r2);
        },
        py::arg("distances"), py::arg("eps_values"));
}
