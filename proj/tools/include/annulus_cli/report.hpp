#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "annulus/analysis.hpp"
#include "annulus/radial.hpp"
#include "annulus_cli/config.hpp"

namespace annulus::cli {

using Json = nlohmann::ordered_json;

/// Finite values as JSON numbers; inf and nan as the strings "inf", "-inf", "nan".
Json number(double value);
/// {"value", "method", "resolution"}: every reported numeric carries its provenance.
Json quantity(double value, const std::string& method, const std::string& resolution);
Json inequality_json(const InequalityReport& r);
Json settings_json(const RunConfig& config);

struct Provenance {
  std::string method;
  std::string resolution;
};
Provenance radial_provenance(const RadialEigenResult& r);
Provenance fem_provenance(Resolution res);
std::string resolution_string(Resolution res);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& j);

/// Joins `name` onto the output directory (creating it if needed).
std::string output_path(const RunConfig& config, const std::string& name);

struct Series {
  std::string name;
  std::vector<double> y;
};
/// Minimal SVG polyline plot; no metadata, so identical data gives identical bytes.
std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                          const std::vector<Series>& series, bool log_x);

}  // namespace annulus::cli
