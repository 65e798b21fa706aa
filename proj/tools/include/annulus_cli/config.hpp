#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "annulus/fem.hpp"
#include "annulus/geometry.hpp"
#include "annulus/radial.hpp"

namespace annulus::cli {

/// Bad command line or configuration; maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat key=value settings. Keys use underscores; flags use the same names with dashes.
using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines; blank lines and lines starting with '#' are
/// skipped. Unknown or repeated keys are rejected.
ConfigMap parse_config(std::string_view text);
ConfigMap read_config_file(const std::string& path);

/// Every key the tool understands.
const std::vector<std::string>& known_keys();
/// Keys accepted by one command (shell, fem, verify, sweep).
const std::vector<std::string>& command_keys(const std::string& command);

struct RunConfig {
  std::string command;
  // shell
  int n = 2;
  double r1 = 1.0;
  double r2 = 2.0;
  RadialMethod method = RadialMethod::shooting;
  // shared
  double beta = 1.0;
  std::vector<double> betas;
  std::optional<AnnularDomain> domain;
  std::string outer_spec;
  std::string inner_spec;
  Resolution resolution{64, 256};
  std::vector<Resolution> resolutions;
  std::vector<double> offsets;
  std::string suite = "all";
  std::string sweep = "beta";
  std::uint64_t seed = 1;
  int quad_level = 256;
  int levels = 16;
  double fd_step = 1e-2;
  double continuity_tolerance = 1e-3;
  double residual_tolerance = 1e-10;
  double cg_tolerance = 1e-13;
  int threads = 0;  // 0: ANNULUS_SPECTRA_THREADS or hardware concurrency
  std::string out = ".";
  /// The merged settings in canonical form, echoed into every report.
  ConfigMap settings;

  EigenOptions eigen_options() const;
  /// Worker count after applying the ANNULUS_SPECTRA_THREADS cap.
  int worker_count() const;
};

/// Validates and converts merged settings for `command`; throws UsageError.
RunConfig make_run_config(const std::string& command, const ConfigMap& settings);

// Value parsers shared with the flag layer; all throw UsageError.
double parse_number(const std::string& key, const std::string& text);
/// Accepts a number >= 0 or "inf".
double parse_beta(const std::string& key, const std::string& text);
Resolution parse_resolution(const std::string& key, const std::string& text);
/// Comma-separated list, or `logspace:a:b:k` (k points from 10^a to 10^b).
std::vector<double> parse_number_list(const std::string& key, const std::string& text);

}  // namespace annulus::cli
