#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vvlab/diagnostics.hpp"
#include "vvlab/harness.hpp"
#include "vvlab/solver.hpp"

namespace vvlab::io {

// 17 significant digits: round-trips every double exactly.
std::string format_double(double v);

// Trajectory file: `key=value` header lines, then one block per snapshot
// opened by `# t=<time>` and holding `x,u,P` rows.
void write_trajectory(std::ostream& os, const Trajectory& traj);
void write_trajectory(const std::filesystem::path& path, const Trajectory& traj);
// Rebuilds the trajectory and recomputes its per-snapshot series.
Trajectory read_trajectory(std::istream& is);
Trajectory read_trajectory(const std::filesystem::path& path);

// `name,time,value` rows.
void write_series_csv(std::ostream& os, std::span<const DiagSeries> series);
std::vector<DiagSeries> read_series_csv(std::istream& is);

nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(std::span<const BoundReport> reports);

// Sweep outputs.
void write_sweep_csv(std::ostream& os, const SweepResult& result);
nlohmann::json rates_json(const SweepResult& result);

std::string norm_label(double p);

}  // namespace vvlab::io
