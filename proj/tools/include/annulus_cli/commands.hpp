#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "annulus_cli/config.hpp"
#include "annulus_cli/report.hpp"

namespace annulus::cli {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct SuiteResult {
  std::string name;
  bool pass = false;
  Json report;
};

/// Property suites behind `verify`; each is deterministic for a fixed config.
const std::vector<std::string>& suite_names();
SuiteResult run_suite(const std::string& name, const RunConfig& config);

// Subcommands. Each writes its files atomically under config.out, prints a short
// summary to `out` and returns the exit status.
int run_shell(const RunConfig& config, std::ostream& out);
int run_fem(const RunConfig& config, std::ostream& out);
int run_verify(const RunConfig& config, std::ostream& out);
int run_sweep(const RunConfig& config, std::ostream& out);
int run_command(const RunConfig& config, std::ostream& out);

/// Full command line entry point: parses flags and config, dispatches, and maps
/// errors to exit statuses (usage 2, numerical or verification failure 1).
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace annulus::cli
