#include "vvlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "vvlab/errors.hpp"

namespace vvlab::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

double parse_double(const std::string& s, const std::string& what) {
  // strtod accepts the inf/nan spellings printf produces.
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ConfigError(what, "cannot parse number '" + s + "'");
  }
  return v;
}

std::string flux_name(const FluxModel& m) {
  switch (m.kind()) {
    case FluxKind::Quadratic: return "quadratic";
    case FluxKind::Cubic: return "cubic";
    case FluxKind::Custom: return "custom";
  }
  return "custom";
}

std::string limiter_name(Limiter l) { return l == Limiter::None ? "none" : "llf"; }

}  // namespace

void write_trajectory(std::ostream& os, const Trajectory& traj) {
  const auto& p = traj.params;
  const auto& o = traj.options;
  os << "# vvlab trajectory v1\n";
  os << "eps=" << format_double(p.eps) << '\n';
  os << "beta=" << format_double(p.beta) << '\n';
  os << "delta=" << format_double(p.delta) << '\n';
  os << "gamma=" << format_double(p.gamma) << '\n';
  os << "flux=" << flux_name(traj.model) << '\n';
  os << "L=" << format_double(traj.grid.half_width) << '\n';
  os << "N=" << traj.grid.n_cells << '\n';
  os << "cfl_hyp=" << format_double(o.cfl_hyp) << '\n';
  os << "cfl_visc=" << format_double(o.cfl_visc) << '\n';
  os << "cfl_disp=" << format_double(o.cfl_disp) << '\n';
  os << "t_end=" << format_double(o.t_end) << '\n';
  os << "snapshot_stride=" << o.snapshot_stride << '\n';
  os << "snapshot_interval=" << format_double(o.snapshot_interval) << '\n';
  os << "limiter=" << limiter_name(o.limiter) << '\n';
  os << "max_steps=" << o.max_steps << '\n';
  os << "fixed_dt=" << format_double(o.fixed_dt) << '\n';
  os << "steps=" << traj.steps << '\n';
  for (const auto& s : traj.snapshots) {
    os << "# t=" << format_double(s.t) << '\n';
    for (std::size_t i = 0; i < traj.grid.n_cells; ++i) {
      os << format_double(traj.grid.x(i)) << ',' << format_double(s.u[i]) << ','
         << format_double(s.P ? (*s.P)[i] : 0.0) << '\n';
    }
  }
}

void write_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_trajectory(os, traj);
}

Trajectory read_trajectory(std::istream& is) {
  std::map<std::string, std::string> header;
  std::string line;
  std::vector<State> snaps;
  std::vector<double> u, P;
  double t = 0.0;
  bool in_block = false;
  auto flush = [&] {
    if (!in_block) return;
    State s;
    s.u = Field(u, t);
    s.P = Field(P, t);
    s.t = t;
    snaps.push_back(std::move(s));
    u.clear();
    P.clear();
  };
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.rfind("# t=", 0) == 0) {
      flush();
      t = parse_double(line.substr(4), "snapshot time");
      in_block = true;
      continue;
    }
    if (line[0] == '#') continue;
    if (!in_block) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("header", "malformed line '" + line + "'");
      header[line.substr(0, eq)] = line.substr(eq + 1);
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ConfigError("snapshot", "malformed row '" + line + "'");
    }
    u.push_back(parse_double(line.substr(c1 + 1, c2 - c1 - 1), "u"));
    P.push_back(parse_double(line.substr(c2 + 1), "P"));
  }
  flush();

  auto get = [&](const std::string& key) -> const std::string& {
    auto it = header.find(key);
    if (it == header.end()) throw ConfigError(key, "missing trajectory header field");
    return it->second;
  };
  auto num = [&](const std::string& key) { return parse_double(get(key), key); };
  auto count = [&](const std::string& key) {
    return static_cast<std::size_t>(std::stoull(get(key)));
  };

  Trajectory traj;
  traj.params = ParamSet{num("eps"), num("beta"), num("delta"), num("gamma")};
  const std::string flux = get("flux");
  if (flux == "quadratic") {
    traj.model = FluxModel::quadratic();
  } else if (flux == "cubic") {
    traj.model = FluxModel::cubic();
  } else {
    throw ConfigError("flux", "custom fluxes cannot be restored from a file");
  }
  traj.grid = make_grid(num("L"), count("N"));
  traj.options.cfl_hyp = num("cfl_hyp");
  traj.options.cfl_visc = num("cfl_visc");
  traj.options.cfl_disp = num("cfl_disp");
  traj.options.t_end = num("t_end");
  traj.options.snapshot_stride = count("snapshot_stride");
  traj.options.snapshot_interval = num("snapshot_interval");
  traj.options.limiter = get("limiter") == "none" ? Limiter::None : Limiter::LocalLaxFriedrichs;
  traj.options.max_steps = count("max_steps");
  traj.options.fixed_dt = num("fixed_dt");
  traj.steps = count("steps");
  for (const auto& s : snaps) {
    if (s.u.size() != traj.grid.n_cells) {
      throw ConfigError("snapshot", "block at t=" + format_double(s.t) + " has wrong row count");
    }
  }
  if (snaps.empty()) throw ConfigError("snapshot", "trajectory file holds no snapshots");
  traj.snapshots = std::move(snaps);
  traj.diagnostics = snapshot_series(traj);
  return traj;
}

Trajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return read_trajectory(is);
}

void write_series_csv(std::ostream& os, std::span<const DiagSeries> series) {
  os << "name,time,value\n";
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      os << s.name << ',' << format_double(s.times[i]) << ',' << format_double(s.values[i]) << '\n';
    }
  }
}

std::vector<DiagSeries> read_series_csv(std::istream& is) {
  std::vector<DiagSeries> out;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line == "name,time,value") continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ConfigError("csv", "malformed row '" + line + "'");
    }
    const std::string name = line.substr(0, c1);
    if (out.empty() || out.back().name != name) out.push_back(DiagSeries{name, {}, {}, std::nullopt});
    out.back().push(parse_double(line.substr(c1 + 1, c2 - c1 - 1), "time"),
                    parse_double(line.substr(c2 + 1), "value"));
  }
  return out;
}

nlohmann::json to_json(const BoundReport& r) {
  return nlohmann::json{{"id", to_string(r.id)},
                        {"scaling_expr", r.scaling_expr},
                        {"scaling", r.scaling},
                        {"measured", r.measured},
                        {"fitted_constant", r.fitted_constant},
                        {"cap", r.cap},
                        {"pass", r.pass}};
}

nlohmann::json to_json(std::span<const BoundReport> reports) {
  auto arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string norm_label(double p) {
  if (std::isinf(p)) return "Linf";
  std::ostringstream os;
  os << 'L' << p;
  return os.str();
}

void write_sweep_csv(std::ostream& os, const SweepResult& result) {
  os << "k,eps,beta,delta,gamma";
  for (double p : result.norms) os << ",d_" << norm_label(p);
  os << ",entropy_floor,status";
  for (BoundId id : all_bounds()) os << ",bound_" << to_string(id);
  os << '\n';
  for (const auto& c : result.cells) {
    os << c.k << ',' << format_double(c.params.eps) << ',' << format_double(c.params.beta) << ','
       << format_double(c.params.delta) << ',' << format_double(c.params.gamma);
    for (std::size_t j = 0; j < result.norms.size(); ++j) {
      os << ',' << (c.ok ? format_double(c.distances[j]) : "NA");
    }
    os << ',' << (c.ok ? format_double(c.entropy_floor) : "NA");
    os << ',' << (c.ok ? "ok" : "failed");
    for (BoundId id : all_bounds()) {
      std::string flag = "NA";
      for (const auto& b : c.bounds) {
        if (b.id == id) flag = b.pass ? "1" : "0";
      }
      os << ',' << flag;
    }
    os << '\n';
  }
}

nlohmann::json rates_json(const SweepResult& result) {
  nlohmann::json out = nlohmann::json::object();
  for (std::size_t j = 0; j < result.norms.size(); ++j) {
    const auto& fit = result.rates[j];
    if (fit) {
      out[norm_label(result.norms[j])] = {
          {"slope", fit->slope}, {"intercept", fit->intercept}, {"r2", fit->r2}};
    } else {
      out[norm_label(result.norms[j])] = {{"error", "insufficient-data"}};
    }
  }
  return out;
}

}  // namespace vvlab::io
