#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "vvlab/harness.hpp"

namespace vvlab::config {

// One regularized run, as read by `vvlab solve`.
struct SolveConfig {
  ParamSet params;
  Grid1D grid;
  FluxKind model = FluxKind::Quadratic;
  InitData init{SineModes{{{2, 1.0}}}};
  SolverOptions options;
};

// Parses a file; syntax errors become ConfigError naming line and column.
nlohmann::json load(const std::filesystem::path& path);

// Both throw ConfigError whose field() is the dotted JSON path at fault,
// e.g. "grid.N".
SolveConfig parse_solve(const nlohmann::json& doc);
SweepConfig parse_sweep(const nlohmann::json& doc);

// Hex FNV-1a of the compact dump; names run directories.
std::string hash(const nlohmann::json& doc);

}  // namespace vvlab::config
