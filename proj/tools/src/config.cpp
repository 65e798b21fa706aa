#include "annulus_cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/parallel.hpp"

namespace annulus::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) parts.push_back(trim(item));
  return parts;
}

int parse_int(const std::string& key, const std::string& text, int lo, int hi) {
  int value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw UsageError(key + ": expected an integer, got '" + text + "'");
  if (value < lo || value > hi) {
    throw UsageError(key + ": " + text + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return value;
}

double positive(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (!(v > 0.0) || !std::isfinite(v)) throw UsageError(key + " must be a positive number");
  return v;
}

const std::set<std::string> kSuites = {"geometry", "radial", "theorem", "bounds", "shape-derivative", "web", "all"};
const std::set<std::string> kSweeps = {"beta", "offset", "resolution"};

}  // namespace

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (t.empty() || ec != std::errc{} || ptr != end || std::isnan(value)) {
    throw UsageError(key + ": expected a number, got '" + text + "'");
  }
  return value;
}

double parse_beta(const std::string& key, const std::string& text) {
  const double b = parse_number(key, text);
  if (!(b >= 0.0)) throw UsageError(key + " must be >= 0 or inf");
  return b;
}

Resolution parse_resolution(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  const auto x = t.find('x');
  if (x == std::string::npos) throw UsageError(key + ": expected NRxNA, got '" + text + "'");
  return {parse_int(key, t.substr(0, x), 2, 1024), parse_int(key, t.substr(x + 1), 8, 8192)};
}

std::vector<double> parse_number_list(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> out;
  if (t.empty()) return out;
  if (t.starts_with("logspace:")) {
    const auto parts = split(t.substr(9), ':');
    if (parts.size() != 3) throw UsageError(key + ": expected logspace:a:b:k");
    const double a = parse_number(key, parts[0]);
    const double b = parse_number(key, parts[1]);
    const int k = parse_int(key, parts[2], 0, 10000);
    for (int i = 0; i < k; ++i) out.push_back(std::pow(10.0, k == 1 ? a : a + (b - a) * i / (k - 1)));
    return out;
  }
  for (const auto& item : split(t, ',')) {
    if (!item.empty()) out.push_back(parse_number(key, item));
  }
  return out;
}

ConfigMap parse_config(std::string_view text) {
  ConfigMap out;
  const auto& keys = known_keys();
  std::istringstream is{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(is, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw UsageError("config line " + std::to_string(number) + ": unknown key '" + key + "'");
    }
    if (out.count(key)) throw UsageError("config line " + std::to_string(number) + ": repeated key '" + key + "'");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

ConfigMap read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "command",    "n",        "r1",       "r2",          "beta",        "betas",
      "method",     "outer",    "inner",    "res",         "resolutions", "offsets",
      "suite",      "sweep",    "seed",     "quad_level",  "levels",      "fd_step",
      "continuity_tolerance",   "residual_tolerance",      "cg_tolerance", "threads",
      "out"};
  return keys;
}

const std::vector<std::string>& command_keys(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"shell", {"command", "n", "r1", "r2", "beta", "method", "out"}},
      {"fem", {"command", "outer", "inner", "beta", "res", "residual_tolerance", "cg_tolerance", "out"}},
      {"verify",
       {"command", "suite", "seed", "beta", "betas", "res", "quad_level", "levels", "fd_step",
        "continuity_tolerance", "residual_tolerance", "cg_tolerance", "threads", "out"}},
      {"sweep",
       {"command", "sweep", "n", "r1", "r2", "beta", "betas", "outer", "inner", "res", "resolutions", "offsets",
        "residual_tolerance", "cg_tolerance", "threads", "out"}},
  };
  const auto it = table.find(command);
  if (it == table.end()) throw UsageError("unknown command '" + command + "'");
  return it->second;
}

EigenOptions RunConfig::eigen_options() const {
  EigenOptions o;
  o.residual_tolerance = residual_tolerance;
  o.cg_tolerance = cg_tolerance;
  return o;
}

int RunConfig::worker_count() const {
  const int cap = default_thread_count();
  return threads > 0 ? std::min(threads, cap) : cap;
}

RunConfig make_run_config(const std::string& command, const ConfigMap& settings) {
  const auto& allowed = command_keys(command);
  for (const auto& [key, value] : settings) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw UsageError("key '" + key + "' is not used by command '" + command + "'");
    }
  }
  if (auto it = settings.find("command"); it != settings.end() && it->second != command) {
    throw UsageError("config is for command '" + it->second + "', not '" + command + "'");
  }
  auto get = [&](const char* key) -> std::optional<std::string> {
    const auto it = settings.find(key);
    return it == settings.end() ? std::nullopt : std::optional<std::string>(it->second);
  };
  auto require = [&](const char* key) {
    auto v = get(key);
    if (!v) throw UsageError(command + ": missing required option --" + std::string(key));
    return *v;
  };

  RunConfig c;
  c.command = command;
  c.settings = settings;
  c.settings["command"] = command;

  if (auto v = get("n")) c.n = parse_int("n", *v, 2, 10);
  if (command == "shell") {
    c.r1 = positive("r1", require("r1"));
    c.r2 = positive("r2", require("r2"));
  } else {
    if (auto v = get("r1")) c.r1 = positive("r1", *v);
    if (auto v = get("r2")) c.r2 = positive("r2", *v);
  }
  if (!(c.r1 < c.r2)) throw UsageError("r1 must be smaller than r2");
  if (auto v = get("method")) {
    try {
      c.method = parse_radial_method(*v);
    } catch (const Error& e) {
      throw UsageError(std::string("method: ") + e.what());
    }
  }
  if (c.method == RadialMethod::closed_form_3d && c.n != 3) throw UsageError("method closed3d needs n = 3");

  if (command == "shell" || command == "fem") {
    c.beta = parse_beta("beta", require("beta"));
  } else if (auto v = get("beta")) {
    c.beta = parse_beta("beta", *v);
  }
  if (auto v = get("betas")) {
    c.betas = parse_number_list("betas", *v);
    for (double b : c.betas) {
      if (!(b >= 0.0)) throw UsageError("betas must be >= 0");
    }
  }

  const auto outer = get("outer");
  const auto inner = get("inner");
  if (command == "fem" && (!outer || !inner)) throw UsageError("fem: --outer and --inner are required");
  if (outer.has_value() != inner.has_value()) throw UsageError("--outer and --inner must be given together");
  if (outer) {
    c.outer_spec = *outer;
    c.inner_spec = *inner;
    try {
      c.domain.emplace(parse_curve(*outer), parse_curve(*inner));
    } catch (const Error& e) {
      throw UsageError(std::string("invalid domain: ") + e.what());
    }
  }

  if (auto v = get("res")) c.resolution = parse_resolution("res", *v);
  if (auto v = get("resolutions")) {
    for (const auto& item : split(*v, ',')) {
      if (!item.empty()) c.resolutions.push_back(parse_resolution("resolutions", item));
    }
  }
  if (auto v = get("offsets")) {
    c.offsets = parse_number_list("offsets", *v);
    for (double f : c.offsets) {
      if (!(f >= 0.0 && f <= 1.0)) throw UsageError("offsets are fractions in [0, 1]");
    }
  }
  if (auto v = get("suite")) {
    if (!kSuites.count(*v)) throw UsageError("unknown suite '" + *v + "'");
    c.suite = *v;
  }
  if (auto v = get("sweep")) {
    if (!kSweeps.count(*v)) throw UsageError("unknown sweep '" + *v + "'");
    c.sweep = *v;
  }
  if (auto v = get("seed")) {
    auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), c.seed);
    if (ec != std::errc{} || ptr != v->data() + v->size()) throw UsageError("seed: expected an unsigned integer");
  }
  if (auto v = get("quad_level")) c.quad_level = parse_int("quad_level", *v, 8, 8192);
  if (auto v = get("levels")) c.levels = parse_int("levels", *v, 2, 4096);
  if (auto v = get("fd_step")) c.fd_step = positive("fd_step", *v);
  if (auto v = get("continuity_tolerance")) c.continuity_tolerance = positive("continuity_tolerance", *v);
  if (auto v = get("residual_tolerance")) c.residual_tolerance = positive("residual_tolerance", *v);
  if (auto v = get("cg_tolerance")) c.cg_tolerance = positive("cg_tolerance", *v);
  if (auto v = get("threads")) c.threads = parse_int("threads", *v, 0, 1024);
  if (auto v = get("out")) {
    if (v->empty()) throw UsageError("out must not be empty");
    c.out = *v;
  }

  if (command == "sweep") {
    const bool empty = (c.sweep == "beta" && c.betas.empty()) || (c.sweep == "offset" && c.offsets.empty()) ||
                       (c.sweep == "resolution" && c.resolutions.empty());
    if (empty) throw UsageError("sweep " + c.sweep + ": empty grid");
    if (c.sweep == "resolution" && c.resolutions.size() < 2) throw UsageError("resolution sweep needs two levels");
  }
  return c;
}

}  // namespace annulus::cli
