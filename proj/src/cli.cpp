#include "vvlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "vvlab/config.hpp"
#include "vvlab/errors.hpp"
#include "vvlab/io.hpp"

namespace vvlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Creates <out>/<hash>; refuses to reuse an existing run directory unless forced.
fs::path prepare_run_dir(const fs::path& out_dir, const json& doc, bool force) {
  const fs::path dir = out_dir / config::hash(doc);
  if (fs::exists(dir)) {
    if (!force) {
      throw ConfigError("--out", "run directory " + dir.string() +
                                     " already exists (use --force to overwrite)");
    }
    fs::remove_all(dir);
  }
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

std::string read_text(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

std::vector<DiagSeries> solve_series(const Trajectory& traj) {
  std::vector<DiagSeries> series = traj.diagnostics;
  if (traj.params.beta == 0.0 && traj.snapshots.size() > 1) {
    series.push_back(energy_balance_residual(traj));
  }
  return series;
}

void write_solve_outputs(const fs::path& dir, const Trajectory& traj) {
  io::write_trajectory(dir / "trajectory.txt", traj);
  const auto series = solve_series(traj);
  std::ofstream csv(dir / "diagnostics.csv");
  io::write_series_csv(csv, series);
  const auto bounds = monitor_all(traj);
  write_text(dir / "bounds.json", io::to_json(bounds).dump(2) + "\n");
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

int report_solve(const fs::path& dir, std::ostream& out) {
  const Trajectory traj = io::read_trajectory(dir / "trajectory.txt");
  const fs::path rep = dir / "report";
  fs::create_directories(rep);

  const auto series = solve_series(traj);
  {
    std::ofstream csv(rep / "diagnostics.csv");
    io::write_series_csv(csv, series);
  }
  {
    std::ofstream os(rep / "energy.dat");
    os << "# t energy\n";
    const DiagSeries* e = traj.series("energy");
    for (std::size_t i = 0; i < e->size(); ++i) {
      os << io::format_double(e->times[i]) << ' ' << io::format_double(e->values[i]) << '\n';
    }
  }
  for (std::size_t n = 0; n < traj.snapshots.size(); ++n) {
    std::ostringstream name;
    name << "snapshot_" << std::setw(5) << std::setfill('0') << n << ".dat";
    std::ofstream os(rep / name.str());
    const auto& s = traj.snapshots[n];
    os << "# t=" << io::format_double(s.t) << "\n# x u\n";
    for (std::size_t i = 0; i < traj.grid.n_cells; ++i) {
      os << io::format_double(traj.grid.x(i)) << ' ' << io::format_double(s.u[i]) << '\n';
    }
  }

  std::ostringstream summary;
  summary << "run: eps=" << traj.params.eps << " beta=" << traj.params.beta
          << " delta=" << traj.params.delta << " gamma=" << traj.params.gamma
          << " N=" << traj.grid.n_cells << " snapshots=" << traj.snapshots.size() << '\n';
  summary << std::left << std::setw(20) << "bound" << std::setw(16) << "measured" << std::setw(16)
          << "scaling" << std::setw(16) << "constant" << std::setw(10) << "cap"
          << "pass\n";
  const json bounds = json::parse(read_text(dir / "bounds.json"));
  for (const auto& b : bounds) {
    summary << std::left << std::setw(20) << b.at("id").get<std::string>() << std::setw(16)
            << b.at("measured").get<double>() << std::setw(16) << b.at("scaling").get<double>()
            << std::setw(16) << b.at("fitted_constant").get<double>() << std::setw(10)
            << b.at("cap").get<double>() << (b.at("pass").get<bool>() ? "yes" : "NO") << '\n';
  }
  write_text(rep / "summary.txt", summary.str());
  out << summary.str();
  return kOk;
}

int report_sweep(const fs::path& dir, std::ostream& out) {
  std::ifstream is(dir / "sweep.csv");
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("sweep.csv", "empty file");
  const auto header = split(line, ',');
  std::vector<std::size_t> dist_cols;
  std::size_t eps_col = 1;
  std::size_t floor_col = 0, status_col = 0;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j].rfind("d_", 0) == 0) dist_cols.push_back(j);
    if (header[j] == "entropy_floor") floor_col = j;
    if (header[j] == "status") status_col = j;
  }
  const fs::path rep = dir / "report";
  fs::create_directories(rep);
  std::ofstream dat(rep / "distance.dat");
  dat << "# k eps";
  for (auto j : dist_cols) dat << ' ' << header[j];
  dat << '\n';

  std::ostringstream summary;
  summary << std::left << std::setw(4) << "k" << std::setw(14) << "eps";
  for (auto j : dist_cols) summary << std::setw(24) << header[j];
  summary << std::setw(24) << "entropy_floor" << "status\n";
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto row = split(line, ',');
    if (row.size() != header.size()) throw ConfigError("sweep.csv", "ragged row");
    dat << row[0] << ' ' << row[eps_col];
    for (auto j : dist_cols) dat << ' ' << row[j];
    dat << '\n';
    summary << std::left << std::setw(4) << row[0] << std::setw(14) << row[eps_col];
    for (auto j : dist_cols) summary << std::setw(24) << row[j];
    summary << std::setw(24) << row[floor_col] << row[status_col] << '\n';
  }
  const json rates = json::parse(read_text(dir / "rates.json"));
  for (const auto& [norm, fit] : rates.items()) {
    if (fit.contains("slope")) {
      summary << "slope " << norm << ": " << fit.at("slope").get<double>()
              << " (R^2 = " << fit.at("r2").get<double>() << ")\n";
    } else {
      summary << "slope " << norm << ": " << fit.at("error").get<std::string>() << '\n';
    }
  }
  write_text(rep / "summary.txt", summary.str());
  out << summary.str();
  return kOk;
}

}  // namespace

int cmd_solve(const fs::path& config_path, const fs::path& out_dir, bool force, bool verbose,
              std::ostream& out, std::ostream& err) {
  json doc;
  config::SolveConfig cfg;
  fs::path dir;
  try {
    doc = config::load(config_path);
    cfg = config::parse_solve(doc);
    dir = prepare_run_dir(out_dir, doc, force);
    write_text(dir / "config.json", doc.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  const FluxModel model =
      cfg.model == FluxKind::Cubic ? FluxModel::cubic() : FluxModel::quadratic();
  try {
    const Field u0 = cfg.init.realize(cfg.grid);
    const Trajectory traj = solve(u0, cfg.params, model, cfg.grid, cfg.options);
    write_solve_outputs(dir, traj);
    if (verbose) {
      err << "steps=" << traj.steps << " snapshots=" << traj.snapshots.size()
          << (cfg.params.relaxed() ? " (relaxed P)" : " (static P)") << '\n';
    }
  } catch (const IncompleteRun& e) {
    write_solve_outputs(dir, e.partial());
    err << "incomplete run: " << e.what() << '\n';
    return kBlowUp;
  } catch (const BlowUp& e) {
    err << "blow-up: " << e.what() << '\n';
    return kBlowUp;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  out << dir.string() << '\n';
  return kOk;
}

int cmd_sweep(const fs::path& config_path, const fs::path& out_dir, std::size_t jobs, bool force,
              bool verbose, std::ostream& out, std::ostream& err) {
  json doc;
  SweepConfig cfg;
  fs::path dir;
  try {
    doc = config::load(config_path);
    cfg = config::parse_sweep(doc);
    dir = prepare_run_dir(out_dir, doc, force);
    write_text(dir / "config.json", doc.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  SweepResult result;
  try {
    result = run_sweep(cfg, std::max<std::size_t>(1, jobs));
  } catch (const SweepFailure& e) {
    err << "sweep failed: " << e.what() << '\n';
    return kSweepFailure;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  {
    std::ofstream csv(dir / "sweep.csv");
    io::write_sweep_csv(csv, result);
  }
  write_text(dir / "rates.json", io::rates_json(result).dump(2) + "\n");
  json bounds = json::object();
  for (const auto& c : result.cells) {
    if (!c.ok) continue;
    bounds[std::to_string(c.k)] = io::to_json(c.bounds);
    std::ostringstream name;
    name << "traj_k" << c.k << ".txt";
    io::write_trajectory(dir / name.str(), *c.trajectory);
  }
  write_text(dir / "bounds.json", bounds.dump(2) + "\n");
  if (std::any_of(result.cells.begin(), result.cells.end(),
                  [](const SweepCell& c) { return c.ok && c.coarse_snapshots; })) {
    err << "warning: snapshot spacing exceeds dx; entropy residuals are under-resolved in time "
           "(lower snapshot_stride or set snapshot_interval)\n";
  }
  if (verbose) {
    for (const auto& c : result.cells) {
      err << "k=" << c.k << (c.ok ? " ok" : " failed: " + c.error) << '\n';
    }
  }
  out << dir.string() << '\n';
  return kOk;
}

int cmd_compare(const fs::path& a, const fs::path& b, double norm, std::ostream& out,
                std::ostream& err) {
  try {
    const Trajectory ta = io::read_trajectory(a);
    const Trajectory tb = io::read_trajectory(b);
    if (ta.grid.n_cells != tb.grid.n_cells || ta.grid.half_width != tb.grid.half_width) {
      throw ConfigError("grid", "trajectories live on different grids");
    }
    out << io::format_double(lp_distance(ta.final().u, tb.final().u, norm, ta.grid)) << '\n';
  } catch (const std::exception& e) {
    err << "compare: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

int cmd_report(const fs::path& run_dir, std::ostream& out, std::ostream& err) {
  try {
    if (fs::exists(run_dir / "sweep.csv") && fs::exists(run_dir / "rates.json")) {
      return report_sweep(run_dir, out);
    }
    if (fs::exists(run_dir / "trajectory.txt") && fs::exists(run_dir / "bounds.json")) {
      return report_solve(run_dir, out);
    }
    err << "report: " << run_dir.string() << " is not a solve or sweep run directory\n";
  } catch (const std::exception& e) {
    err << "report: " << e.what() << '\n';
  }
  return kConfigError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Vanishing-viscosity laboratory for Ostrovsky-Hunter and short-pulse systems",
               "vvlab"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "runs";
  std::size_t jobs = 1;
  bool force = false;
  bool verbose = false;

  auto* solve_cmd = app.add_subcommand("solve", "Run one regularized solve");
  solve_cmd->add_option("--config", config_path, "JSON config")->required();
  solve_cmd->add_option("--out", out_dir, "Output root; the run directory is <out>/<config hash>");
  solve_cmd->add_flag("--force", force, "Overwrite an existing run directory");
  solve_cmd->add_flag("--verbose", verbose);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep along a scaling regime");
  sweep_cmd->add_option("--config", config_path, "JSON config")->required();
  sweep_cmd->add_option("--out", out_dir, "Output root; the run directory is <out>/<config hash>");
  sweep_cmd->add_option("--jobs", jobs, "Concurrent sweep cells")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--force", force, "Overwrite an existing run directory");
  sweep_cmd->add_flag("--verbose", verbose);

  std::vector<std::string> files;
  std::string norm = "1";
  auto* compare_cmd = app.add_subcommand("compare", "Lp distance between two final states");
  compare_cmd->add_option("files", files, "Two trajectory files")->expected(2)->required();
  compare_cmd->add_option("--norm", norm, "1, 2, ... or inf");
  compare_cmd->add_flag("--verbose", verbose);

  std::string run_dir;
  auto* report_cmd = app.add_subcommand("report", "Emit plottable data and a summary table");
  report_cmd->add_option("run_dir", run_dir, "Run directory from solve or sweep");
  report_cmd->add_option("--out", run_dir, "Same as the positional run directory");
  report_cmd->add_flag("--verbose", verbose);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kConfigError;
  }

  if (*solve_cmd) return cmd_solve(config_path, out_dir, force, verbose, out, err);
  if (*sweep_cmd) return cmd_sweep(config_path, out_dir, jobs, force, verbose, out, err);
  if (*compare_cmd) {
    double p = 1.0;
    if (norm == "inf" || norm == "Linf") {
      p = std::numeric_limits<double>::infinity();
    } else {
      try {
        p = std::stod(norm);
      } catch (const std::exception&) {
        err << "compare: invalid norm '" << norm << "'\n";
        return kConfigError;
      }
    }
    return cmd_compare(files[0], files[1], p, out, err);
  }
  if (*report_cmd) {
    if (run_dir.empty()) {
      err << "report: missing run directory\n";
      return kConfigError;
    }
    return cmd_report(run_dir, out, err);
  }
  return kConfigError;
}

}  // namespace vvlab::cli
