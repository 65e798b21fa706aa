#include "annulus_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"
#include "annulus/io.hpp"
#include "annulus/parallel.hpp"

namespace annulus::cli {
namespace {

void write_json(const RunConfig& c, const std::string& name, const Json& j) {
  write_file_atomic(output_path(c, name), dump(j));
}

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string row;
  bool first = true;
  for (const auto& cell : cells) {
    if (!first) row += ',';
    first = false;
    if (cell.find_first_of(",\"") == std::string::npos) {
      row += cell;
      continue;
    }
    row += '"';
    for (char ch : cell) row += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    row += '"';
  }
  return row + "\n";
}

}  // namespace

int run_shell(const RunConfig& c, std::ostream& out) {
  const ShellSpec shell{c.n, c.r1, c.r2};
  RadialSolveOptions opts;
  opts.method = c.method;
  const RadialEigenResult r = solve_shell(shell, c.beta, opts);
  const Provenance p = radial_provenance(r);

  std::ostringstream csv;
  write_profile_csv(csv, r);
  write_file_atomic(output_path(c, "shell_profile.csv"), csv.str());
  write_json(c, "shell.json",
             Json{{"command", "shell"},
                  {"settings", settings_json(c)},
                  {"n", c.n},
                  {"r1", number(c.r1)},
                  {"r2", number(c.r2)},
                  {"beta", number(c.beta)},
                  {"method", to_string(r.method)},
                  {"lambda", quantity(r.lambda, p.method, p.resolution)},
                  {"r_bar", quantity(r.r_bar, "profile maximum", p.resolution)},
                  {"v_m", quantity(r.v_m, "profile at R2", p.resolution)},
                  {"v_M", quantity(r.v_M, "profile maximum", p.resolution)},
                  {"residual", quantity(r.robin_residual, "Robin residual at R2", p.resolution)},
                  {"profile_csv", "shell_profile.csv"}});
  out << "lambda = " << format_double(r.lambda) << "\n"
      << "r_bar = " << format_double(r.r_bar) << "\n"
      << "v_m = " << format_double(r.v_m) << "\n"
      << "v_M = " << format_double(r.v_M) << "\n";
  return kExitSuccess;
}

int run_fem(const RunConfig& c, std::ostream& out) {
  const FemEigenResult r = solve_domain(*c.domain, c.beta, c.resolution.n_radial, c.resolution.n_angular,
                                        c.eigen_options());
  std::ostringstream csv, mesh;
  write_eigenvector_csv(csv, r.mesh, r.u_h);
  write_mesh(mesh, r.mesh);
  write_file_atomic(output_path(c, "fem_eigenvector.csv"), csv.str());
  write_file_atomic(output_path(c, "fem_mesh.txt"), mesh.str());
  const Provenance p = fem_provenance(c.resolution);
  write_json(c, "fem.json",
             Json{{"command", "fem"},
                  {"settings", settings_json(c)},
                  {"outer", c.domain->outer().to_spec()},
                  {"inner", c.domain->inner().to_spec()},
                  {"beta", number(c.beta)},
                  {"lambda_h", quantity(r.lambda_h, p.method, p.resolution)},
                  {"beta_derivative", quantity(r.beta_derivative, "u^T B u / u^T M u", p.resolution)},
                  {"residual", quantity(r.stats.residual, "||A u - lambda M u|| / ||u||", p.resolution)},
                  {"iterations", r.stats.iterations},
                  {"cg_iterations", r.stats.cg_iterations},
                  {"nodes", r.mesh.node_count()},
                  {"triangles", r.mesh.triangles.size()},
                  {"eigenvector_csv", "fem_eigenvector.csv"},
                  {"mesh_file", "fem_mesh.txt"}});
  out << "lambda_h = " << format_double(r.lambda_h) << " (" << p.resolution << ")\n";
  return kExitSuccess;
}

int run_verify(const RunConfig& c, std::ostream& out) {
  std::vector<std::string> names;
  if (c.suite == "all") {
    names = suite_names();
  } else {
    names = {c.suite};
  }
  bool all_pass = true;
  Json index = Json::array();
  for (const auto& name : names) {
    const SuiteResult s = run_suite(name, c);
    Json report = s.report;
    report["settings"] = settings_json(c);
    const std::string file = "verify_" + name + ".json";
    write_json(c, file, report);
    out << (s.pass ? "PASS " : "FAIL ") << name << "\n";
    all_pass = all_pass && s.pass;
    index.push_back(Json{{"suite", name}, {"pass", s.pass}, {"report", file}});
  }
  if (c.suite == "all") {
    write_json(c, "verify_index.json",
               Json{{"command", "verify"}, {"settings", settings_json(c)}, {"pass", all_pass}, {"suites", index}});
  }
  return all_pass ? kExitSuccess : kExitFailure;
}

int run_sweep(const RunConfig& c, std::ostream& out) {
  const std::string base = "sweep_" + c.sweep;
  std::string csv;
  std::string svg;
  bool ok = true;
  const int threads = c.worker_count();

  if (c.sweep == "beta") {
    std::vector<double> lambdas(c.betas.size());
    Provenance p;
    if (c.domain) {
      p = fem_provenance(c.resolution);
      parallel_for(c.betas.size(), threads, [&](std::size_t i) {
        lambdas[i] = solve_domain(*c.domain, c.betas[i], c.resolution.n_radial, c.resolution.n_angular,
                                  c.eigen_options())
                         .lambda_h;
      });
    } else {
      const ShellSpec shell{c.n, c.r1, c.r2};
      p = radial_provenance(solve_shell(shell, c.betas.front()));
      parallel_for(c.betas.size(), threads,
                   [&](std::size_t i) { lambdas[i] = solve_shell(shell, c.betas[i]).lambda; });
    }
    csv = csv_row({"beta", "lambda", "method", "resolution"});
    for (std::size_t i = 0; i < c.betas.size(); ++i) {
      csv += csv_row({format_double(c.betas[i]), format_double(lambdas[i]), p.method, p.resolution});
      if (i > 0 && c.betas[i] > c.betas[i - 1] && lambdas[i] < lambdas[i - 1]) ok = false;
    }
    svg = line_plot_svg("first eigenvalue vs beta", "beta", c.betas, {{"lambda", lambdas}}, true);
    out << "beta sweep: " << c.betas.size() << " points, " << (ok ? "monotone" : "NOT monotone") << "\n";
  } else if (c.sweep == "offset") {
    const auto family = eccentric_family(c.r1, c.r2, c.offsets, 0.1);
    const auto reports = main_theorem_sweep(family, c.beta, c.resolution, threads);
    const Provenance p = fem_provenance(c.resolution);
    csv = csv_row({"offset_fraction", "lambda_fem", "lambda_radial", "margin", "tolerance", "pass", "method",
                   "resolution"});
    std::vector<double> lhs, rhs, margins;
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const auto& r = reports[i];
      csv += csv_row({format_double(c.offsets[i]), format_double(r.lhs), format_double(r.rhs), format_double(r.margin),
                      format_double(r.tolerance), r.pass ? "true" : "false", p.method, p.resolution});
      ok = ok && r.pass;
      lhs.push_back(r.lhs);
      rhs.push_back(r.rhs);
    }
    svg = line_plot_svg("FEM eigenvalue vs hole offset (beta " + format_double(c.beta) + ")", "offset fraction",
                        c.offsets, {{"lambda FEM", lhs}, {"lambda shell", rhs}}, false);
    out << "offset sweep: " << reports.size() << " domains, " << (ok ? "all pass" : "FAILURES") << "\n";
  } else {
    const AnnularDomain domain =
        c.domain ? *c.domain
                 : AnnularDomain(BoundaryCurve(Circle{{0, 0}, c.r2}), BoundaryCurve(Circle{{0, 0}, c.r1}), Vec2{0, 0});
    std::optional<double> reference;
    const bool concentric = !c.domain;
    if (concentric) reference = solve_shell(ShellSpec{2, c.r1, c.r2}, c.beta).lambda;
    const ConvergenceStudy st = convergence_study(domain, c.beta, c.resolutions, reference, c.eigen_options());
    csv = csv_row({"n_radial", "n_angular", "h", "lambda_h", "error", "reference", "method"});
    std::vector<double> hs, errs;
    for (const auto& row : st.rows) {
      csv += csv_row({std::to_string(row.resolution.n_radial), std::to_string(row.resolution.n_angular),
                      format_double(row.h), format_double(row.lambda_h), format_double(row.error),
                      st.reference_is_exact ? "radial shooting" : "Richardson extrapolation",
                      fem_provenance(row.resolution).method});
      hs.push_back(row.h);
      errs.push_back(row.error > 0 ? std::log10(row.error) : std::nan(""));
    }
    csv += "# observed order " + format_double(st.order) + "\n";
    svg = line_plot_svg("log10 eigenvalue error vs mesh size", "h", hs, {{"log10 error", errs}}, true);
    out << "resolution sweep: observed order " << format_double(st.order) << "\n";
  }
  write_file_atomic(output_path(c, base + ".csv"), csv);
  write_file_atomic(output_path(c, base + ".svg"), svg);
  return ok ? kExitSuccess : kExitFailure;
}

int run_command(const RunConfig& config, std::ostream& out) {
  if (config.command == "shell") return run_shell(config, out);
  if (config.command == "fem") return run_fem(config, out);
  if (config.command == "verify") return run_verify(config, out);
  if (config.command == "sweep") return run_sweep(config, out);
  throw UsageError("unknown command '" + config.command + "'");
}

namespace {

struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_file;
};

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> help = {
      {"n", "space dimension of the shell (2..10)"},
      {"r1", "inner shell radius"},
      {"r2", "outer shell radius"},
      {"beta", "Robin parameter (>= 0 or inf)"},
      {"betas", "beta grid: comma list or logspace:a:b:k"},
      {"method", "radial solver: shooting | fd | closed3d"},
      {"outer", "outer curve: circle cx cy r | ellipse cx cy a b | polygon x1 y1 ..."},
      {"inner", "hole curve, same grammar as --outer"},
      {"res", "mesh resolution NRxNA"},
      {"resolutions", "comma list of NRxNA"},
      {"offsets", "hole offsets as fractions of R2 - R1 - 0.1"},
      {"suite", "geometry | radial | theorem | bounds | shape-derivative | web | all"},
      {"sweep", "beta | offset | resolution"},
      {"seed", "seed of the randomized polygon and radial suites"},
      {"quad_level", "angular panels of the web-function quadrature"},
      {"levels", "levels of the comparison curves"},
      {"fd_step", "largest shape-derivative finite-difference step"},
      {"continuity_tolerance", "accepted web-function jump, in units of v_M"},
      {"residual_tolerance", "eigen residual tolerance"},
      {"cg_tolerance", "inner conjugate-gradient tolerance"},
      {"threads", "worker threads (capped by ANNULUS_SPECTRA_THREADS)"},
      {"out", "output directory"}};
  return help;
}

void add_flags(CLI::App* sub, FlagSet& flags, const std::string& command) {
  for (const auto& key : command_keys(command)) {
    if (key == "command") continue;
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    flags.options[key] = sub->add_option(flag, flags.values[key], flag_help().at(key));
  }
  sub->add_option("--config", flags.config_file, "flat key=value file; flags override it");
}

}  // namespace

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robin-Dirichlet eigenvalues on doubly connected planar domains"};
  app.require_subcommand(0, 1);
  std::string top_config;
  app.add_option("--config", top_config, "run the command named by the config file's `command` key");

  std::map<std::string, FlagSet> flags;
  const std::map<std::string, std::string> help = {
      {"shell", "radial eigenvalue of a spherical shell"},
      {"fem", "P1 finite-element eigenvalue of an annular domain"},
      {"verify", "run property suites and write JSON reports"},
      {"sweep", "beta, offset or resolution sweep with CSV and SVG output"}};
  for (const auto& [name, text] : help) add_flags(app.add_subcommand(name, text), flags[name], name);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    std::string command;
    ConfigMap settings;
    const auto subs = app.get_subcommands();
    if (subs.empty()) {
      if (top_config.empty()) {
        err << app.help();
        return kExitUsage;
      }
      settings = read_config_file(top_config);
      const auto it = settings.find("command");
      if (it == settings.end()) throw UsageError("config file has no `command` key");
      command = it->second;
      command_keys(command);
    } else {
      command = subs.front()->get_name();
      const FlagSet& f = flags[command];
      if (!f.config_file.empty()) settings = read_config_file(f.config_file);
      if (const auto it = settings.find("command"); it != settings.end() && it->second != command) {
        throw UsageError("config file is for `" + it->second + "`, not `" + command + "`");
      }
      for (const auto& [key, opt] : f.options) {
        if (opt->count() > 0) settings[key] = f.values.at(key);
      }
    }
    const RunConfig config = make_run_config(command, settings);
    return run_command(config, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace annulus::cli
