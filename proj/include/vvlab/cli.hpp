#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace vvlab::cli {

// Stable process exit codes.
enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kBlowUp = 2,
  kSweepFailure = 3,
};

// Entry point shared by the `vvlab` binary and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_solve(const std::filesystem::path& config, const std::filesystem::path& out_dir,
              bool force, bool verbose, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::filesystem::path& config, const std::filesystem::path& out_dir,
              std::size_t jobs, bool force, bool verbose, std::ostream& out, std::ostream& err);
int cmd_compare(const std::filesystem::path& a, const std::filesystem::path& b, double norm,
                std::ostream& out, std::ostream& err);
int cmd_report(const std::filesystem::path& run_dir, std::ostream& out, std::ostream& err);

}  // namespace vvlab::cli
