#include "annulus_cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "annulus/io.hpp"

namespace annulus::cli {

Json number(double value) {
  if (std::isfinite(value)) return value;
  return format_double(value);
}

Json quantity(double value, const std::string& method, const std::string& resolution) {
  return Json{{"value", number(value)}, {"method", method}, {"resolution", resolution}};
}

Json inequality_json(const InequalityReport& r) {
  return Json{{"name", r.name},           {"lhs", number(r.lhs)},  {"rhs", number(r.rhs)},
              {"margin", number(r.margin)}, {"tolerance", number(r.tolerance)}, {"pass", r.pass},
              {"method", r.method}};
}

Json settings_json(const RunConfig& config) {
  Json j = Json::object();
  for (const auto& [k, v] : config.settings) {
    if (k != "out") j[k] = v;
  }
  return j;
}

Provenance radial_provenance(const RadialEigenResult& r) {
  switch (r.method) {
    case RadialMethod::shooting:
      return {"radial shooting (dopri5 tol 1e-12, toms748 rel 1e-11)",
              std::to_string(r.profile.size()) + " profile samples"};
    case RadialMethod::finite_difference:
      return {"radial finite differences (Sturm bisection)", "20000 intervals"};
    case RadialMethod::closed_form_3d:
      return {"closed form n=3", "exact"};
  }
  return {"radial", "unknown"};
}

std::string resolution_string(Resolution res) {
  return std::to_string(res.n_radial) + "x" + std::to_string(res.n_angular);
}

Provenance fem_provenance(Resolution res) {
  return {"P1 FEM shifted inverse iteration", resolution_string(res)};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string output_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out);
  return (std::filesystem::path(config.out) / name).string();
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string line_plot_svg(const std::string& title, const std::string& x_label, const std::vector<double>& x,
                          const std::vector<Series>& series, bool log_x) {
  constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  static const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  auto xt = [&](double v) { return log_x ? std::log10(v) : v; };

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (double v : x) {
    if (!std::isfinite(xt(v))) continue;
    x0 = std::min(x0, xt(v));
    x1 = std::max(x1, xt(v));
  }
  for (const auto& s : series) {
    for (double v : s.y) {
      if (!std::isfinite(v)) continue;
      y0 = std::min(y0, v);
      y1 = std::max(y1, v);
    }
  }
  if (!(x1 > x0)) { x0 -= 0.5; x1 += 0.5; }
  if (!(y1 > y0)) { y0 -= 0.5; y1 += 0.5; }
  auto px = [&](double v) { return kLeft + (xt(v) - x0) / (x1 - x0) * (kWidth - kLeft - kRight); };
  auto py = [&](double v) { return kHeight - kBottom - (v - y0) / (y1 - y0) * (kHeight - kTop - kBottom); };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\">\n";
  svg += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
         escape(title) + "</text>\n";
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kHeight - kBottom) + "\" x2=\"" +
         fixed(kWidth - kRight) + "\" y2=\"" + fixed(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fixed(kLeft) + "\" y1=\"" + fixed(kTop) + "\" x2=\"" + fixed(kLeft) + "\" y2=\"" +
         fixed(kHeight - kBottom) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"320\" y=\"390\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" +
         escape(log_x ? "log10 " + x_label : x_label) + "</text>\n";
  svg += "<text x=\"" + fixed(kLeft - 5) + "\" y=\"" + fixed(kTop) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + escape(format_double(y1)) +
         "</text>\n";
  svg += "<text x=\"" + fixed(kLeft - 5) + "\" y=\"" + fixed(kHeight - kBottom) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">" + escape(format_double(y0)) +
         "</text>\n";
  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % std::size(kColors)];
    std::string points;
    for (std::size_t i = 0; i < x.size() && i < series[s].y.size(); ++i) {
      if (!std::isfinite(xt(x[i])) || !std::isfinite(series[s].y[i])) continue;
      if (!points.empty()) points += ' ';
      points += fixed(px(x[i])) + "," + fixed(py(series[s].y[i]));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
           points + "\"/>\n";
    svg += "<text x=\"" + fixed(kWidth - kRight - 5) + "\" y=\"" + fixed(kTop + 14.0 * (s + 1)) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + color + "\">" +
           escape(series[s].name) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace annulus::cli
