#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"
#include "annulus/parallel.hpp"
#include "annulus/webfunc.hpp"
#include "annulus_cli/commands.hpp"

namespace annulus::cli {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> theorem_betas(const RunConfig& c) {
  return c.betas.empty() ? std::vector<double>{0.1, 1.0, 10.0} : c.betas;
}

std::uint64_t polygon_seed(std::uint64_t seed, int i) { return seed * 1000003ULL + static_cast<std::uint64_t>(i); }

Json anchor(const std::string& name, double value, double expected, double tol, bool& pass) {
  const double err = std::abs(value - expected);
  const bool ok = err <= tol;
  pass = pass && ok;
  return Json{{"name", name},         {"value", number(value)}, {"expected", number(expected)},
              {"tolerance", number(tol)}, {"pass", ok},          {"method", "direct evaluation"}};
}

Json polygon_block(const RunConfig& c, int count, bool& pass) {
  Json entries = Json::array();
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = polygon_seed(c.seed, i);
    const ConvexPolygon p = random_convex_polygon(s);
    for (const auto& r : polygon_inequalities(p, "polygon seed " + std::to_string(s))) {
      pass = pass && r.pass;
      worst = std::min(worst, r.margin);
      entries.push_back(inequality_json(r));
    }
  }
  return Json{{"count", count}, {"seed", c.seed}, {"min_margin", number(worst)}, {"reports", entries}};
}

SuiteResult geometry_suite(const RunConfig& c) {
  bool pass = true;
  Json anchors = Json::array();
  const ConvexPolygon square = ConvexPolygon::rectangle(1, 1);
  const auto q = quermassintegrals_2d(square);
  anchors.push_back(anchor("unit square area", polygon_area(square), 1.0, 1e-14, pass));
  anchors.push_back(anchor("unit square W1", q.w1, 2.0, 1e-14, pass));
  anchors.push_back(anchor("unit square W2", q.w2, kPi, 1e-14, pass));
  anchors.push_back(anchor("hexagon area", polygon_area(ConvexPolygon::regular(6, 1.0)), 1.5 * std::sqrt(3.0),
                           1e-12, pass));
  anchors.push_back(anchor("unit square inradius", inradius(square), 0.5, 1e-12, pass));
  anchors.push_back(anchor("equilateral triangle inradius",
                           inradius(ConvexPolygon({{0, 0}, {2, 0}, {1, std::sqrt(3.0)}})), 1.0 / std::sqrt(3.0),
                           1e-12, pass));
  anchors.push_back(anchor("unit square eroded by 0.25, perimeter", inner_parallel(square, 0.25).perimeter(), 2.0,
                           1e-12, pass));
  const auto steiner = outer_parallel_measures(square, 1.0);
  anchors.push_back(anchor("unit square Steiner area at 1", steiner.area, 5.0 + kPi, 1e-12, pass));
  anchors.push_back(anchor("unit square Steiner perimeter at 1", steiner.perimeter, 4.0 + 2.0 * kPi, 1e-12, pass));
  anchors.push_back(anchor("unit square AF margin", aleksandrov_fenchel_margin(square),
                           2.0 / kPi - std::sqrt(1.0 / kPi), 1e-12, pass));
  anchors.push_back(anchor("shell quermass n=3 R=2 i=1", shell_quermass(3, 2.0, 1), 16.0 * kPi / 3.0, 1e-12, pass));

  Json class_s = Json::array();
  for (const auto& m : standard_suite()) {
    const ClassSData d = class_s_data(m.domain);
    const bool ok = d.relative_residual() <= 1e-8;
    pass = pass && ok;
    class_s.push_back(Json{{"domain", m.name},
                           {"r1", number(d.r_inner)},
                           {"r2", number(d.r_outer)},
                           {"relative_residual", number(d.relative_residual())},
                           {"pass", ok},
                           {"method", "perimeters and areas (Gauss-Kronrod for ellipses)"}});
  }
  Json polygons = polygon_block(c, 100, pass);
  return {"geometry", pass,
          Json{{"suite", "geometry"}, {"pass", pass}, {"anchors", anchors}, {"class_s", class_s}, {"polygons", polygons}}};
}

SuiteResult radial_suite(const RunConfig& c) {
  bool pass = true;
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_real_distribution<double> r1d(0.5, 2.0), width(0.5, 2.0), logb(-2.0, 2.0);
  Json cases = Json::array();
  for (int k = 0; k < 25; ++k) {
    const int n = dim(rng);
    const double r1 = r1d(rng);
    const double r2 = r1 + width(rng);
    const double beta = std::pow(10.0, logb(rng));
    const ShellSpec shell{n, r1, r2};
    const RadialEigenResult sh = solve_shell(shell, beta);
    const double fd = solve_shell_fd(shell, beta, 20000);
    const double rel_fd = std::abs(sh.lambda - fd) / sh.lambda;
    bool ok = rel_fd <= 1e-6;
    Json row{{"n", n},
             {"r1", number(r1)},
             {"r2", number(r2)},
             {"beta", number(beta)},
             {"lambda_shooting", quantity(sh.lambda, radial_provenance(sh).method, radial_provenance(sh).resolution)},
             {"lambda_fd", quantity(fd, "radial finite differences (Sturm bisection)", "20000 intervals")},
             {"relative_difference_fd", number(rel_fd)},
             {"tolerance_fd", 1e-6}};
    if (n == 3) {
      const double cf = closed_form_3d(r1, r2, beta);
      const double rel_cf = std::abs(sh.lambda - cf) / sh.lambda;
      ok = ok && rel_cf <= 1e-9;
      row["lambda_closed3d"] = quantity(cf, "closed form n=3", "exact");
      row["relative_difference_closed3d"] = number(rel_cf);
      row["tolerance_closed3d"] = 1e-9;
    }
    row["pass"] = ok;
    pass = pass && ok;
    cases.push_back(row);
  }

  const RadialEigenResult dir = solve_shell(ShellSpec{3, 1.0, 2.0}, kInfiniteBeta);
  const double dir_err = std::abs(dir.lambda - kPi * kPi) / (kPi * kPi);
  const bool dir_ok = dir_err <= 1e-9;
  pass = pass && dir_ok;
  Json dirichlet{{"lambda", quantity(dir.lambda, radial_provenance(dir).method, radial_provenance(dir).resolution)},
                 {"expected", number(kPi * kPi)},
                 {"relative_error", number(dir_err)},
                 {"tolerance", 1e-9},
                 {"pass", dir_ok}};

  Json mono = Json::array();
  for (auto [n, beta] : {std::pair{2, 1.0}, std::pair{3, 5.0}}) {
    const auto m = radii_monotonicity(n, beta, 1.0, 2.0, 9);
    pass = pass && m.violations == 0;
    mono.push_back(Json{{"n", n}, {"beta", number(beta)}, {"steps", 9}, {"violations", m.violations},
                        {"method", "radial shooting"}});
  }
  return {"radial", pass,
          Json{{"suite", "radial"}, {"pass", pass}, {"seed", c.seed}, {"oracle_cases", cases},
               {"dirichlet_anchor", dirichlet}, {"radii_monotonicity", mono}}};
}

SuiteResult theorem_suite(const RunConfig& c) {
  bool pass = true;
  Json rows = Json::array();
  const auto family = standard_suite();
  for (double beta : theorem_betas(c)) {
    for (const auto& r : main_theorem_sweep(family, beta, c.resolution, c.worker_count())) {
      pass = pass && r.pass;
      Json j = inequality_json(r);
      j["beta"] = number(beta);
      rows.push_back(j);
    }
  }
  return {"theorem", pass,
          Json{{"suite", "theorem"}, {"pass", pass}, {"resolution", resolution_string(c.resolution)},
               {"reports", rows}}};
}

Json limits_json(const BetaLimitsReport& r, bool& pass) {
  const bool nd_ok = r.nd_relative_gap <= 1e-3;
  const bool dd_ok = r.dd_gap <= r.dd_bound;
  pass = pass && nd_ok && dd_ok && r.strictly_increasing;
  Json table = Json::array();
  for (std::size_t i = 0; i < r.betas.size(); ++i) {
    table.push_back(Json{{"beta", number(r.betas[i])}, {"lambda", number(r.lambdas[i])}});
  }
  return Json{{"method", r.method},
              {"lambda_nd", number(r.lambda_nd)},
              {"lambda_dd", number(r.lambda_dd)},
              {"nd_relative_gap", number(r.nd_relative_gap)},
              {"nd_tolerance", 1e-3},
              {"nd_pass", nd_ok},
              {"dd_gap", number(r.dd_gap)},
              {"dd_bound", number(r.dd_bound)},
              {"dd_pass", dd_ok},
              {"strictly_increasing", r.strictly_increasing},
              {"table", table}};
}

SuiteResult bounds_suite(const RunConfig& c) {
  bool pass = true;
  Json reports = Json::array();
  auto add = [&](const std::vector<InequalityReport>& rs, const std::string& domain) {
    for (const auto& r : rs) {
      pass = pass && r.pass;
      Json j = inequality_json(r);
      j["domain"] = domain;
      reports.push_back(j);
    }
  };
  add(kuttler_bounds(ShellSpec{2, 1.0, 2.0}, c.beta), "shell (1, 2)");
  const auto family = standard_suite();
  std::vector<std::vector<InequalityReport>> per(family.size());
  parallel_for(family.size(), c.worker_count(),
               [&](std::size_t i) { per[i] = kuttler_bounds(family[i].domain, c.beta, c.resolution); });
  for (std::size_t i = 0; i < family.size(); ++i) add(per[i], family[i].name);
  Json polygons = polygon_block(c, 100, pass);
  Json limits = limits_json(beta_limits_check(ShellSpec{2, 1.0, 2.0}), pass);
  return {"bounds", pass,
          Json{{"suite", "bounds"}, {"pass", pass}, {"beta", number(c.beta)},
               {"resolution", resolution_string(c.resolution)}, {"domain_bounds", reports},
               {"polygons", polygons}, {"beta_limits", limits}}};
}

Json shape_json(const std::string& name, const ShapeDerivativeCheck& s, Resolution res) {
  return Json{{"name", name},
              {"formula", quantity(s.formula, "boundary integral of the FEM eigenpair", resolution_string(res))},
              {"fd", quantity(s.fd.value, "central difference on matched meshes", resolution_string(res))},
              {"fd_steps", s.fd.steps},
              {"fd_values", s.fd.values},
              {"noise", number(s.fd.noise)},
              {"relative_error", number(s.relative_error)},
              {"fd_resolved", s.fd_resolved},
              {"pass", s.pass}};
}

SuiteResult shape_derivative_suite(const RunConfig& c) {
  const AnnularDomain shell(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}), Vec2{0, 0});
  const AnnularDomain ecc(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1}), Vec2{0.5, 0});
  const auto translation = shape_derivative_check(ecc, c.beta, PerturbationField::translation(FieldTarget::inner, {1, 0}),
                                                  c.fd_step, c.resolution);
  const auto mode2 = shape_derivative_check(shell, c.beta, PerturbationField::normal_fourier(FieldTarget::outer, 2, 1.0),
                                            c.fd_step, c.resolution, 10.0);
  const auto rigid = shape_derivative_check(shell, c.beta, PerturbationField::translation(FieldTarget::both, {1, 0}),
                                            c.fd_step, c.resolution, 10.0);
  const bool pass = translation.pass && mode2.pass && rigid.pass;
  return {"shape-derivative", pass,
          Json{{"suite", "shape-derivative"},
               {"pass", pass},
               {"beta", number(c.beta)},
               {"checks", Json::array({shape_json("eccentric annulus, hole translation", translation, c.resolution),
                                       shape_json("shell, outer mode-2 normal field", mode2, c.resolution),
                                       shape_json("shell, rigid translation", rigid, c.resolution)})}}};
}

struct WebCase {
  Json json;
  bool chain_ok = false;
};

WebCase web_case(const NamedDomain& m, double beta, const RunConfig& c) {
  const ClassSData cs = class_s_data(m.domain);
  const RadialEigenResult rad = solve_shell(ShellSpec{2, cs.r_inner, cs.r_outer}, beta);
  WebOptions opts;
  opts.continuity_tolerance = c.continuity_tolerance;
  const WebFunction web(m.domain, rad, opts);
  const RayleighParts rq = rayleigh_quotient(web, beta, c.quad_level, true);
  const FemEstimate fem = fem_estimate(m.domain, beta, c.resolution, c.eigen_options());
  const ComparisonCurves cc = comparison_curves(web, c.levels);
  const double fem_tol = 2.0 * fem.error;
  const bool lower = fem.lambda - fem_tol <= rq.value;
  const bool upper = rq.value <= 1.02 * rad.lambda;
  const bool chain_ok = web.continuous() && lower && upper;
  const std::string quad = "quad_level " + std::to_string(c.quad_level);
  const auto rp = radial_provenance(rad);
  WebCase out;
  out.chain_ok = chain_ok;
  out.json = Json{{"domain", m.name},
                  {"beta", number(beta)},
                  {"s_star", quantity(web.s_star(), "area bisection, polar quadrature", "4096 angular panels")},
                  {"interface_jump", quantity(web.interface_jump(), "sampled interface", "4096 rays")},
                  {"continuity_tolerance", number(web.continuity_tolerance())},
                  {"continuous", web.continuous()},
                  {"rayleigh", quantity(rq.value, "polar Gauss quadrature with breakpoints", quad)},
                  {"lambda_fem", quantity(fem.lambda, fem_provenance(c.resolution).method,
                                          resolution_string(c.resolution))},
                  {"fem_error_estimate", number(fem.error)},
                  {"lambda_shell", quantity(rad.lambda, rp.method, rp.resolution)},
                  {"lower_ok", lower},
                  {"upper_ok", upper},
                  {"chain_ok", chain_ok},
                  {"comparison",
                   Json{{"levels", c.levels},
                        {"tolerance", number(cc.tolerance)},
                        {"outer_measure_violation", number(cc.outer_measure_violation)},
                        {"inner_measure_violation", number(cc.inner_measure_violation)},
                        {"perimeter_violation", number(cc.perimeter_violation)},
                        {"pass", cc.pass()}}}};
  return out;
}

SuiteResult web_suite(const RunConfig& c) {
  const auto family = standard_suite();
  const auto betas = theorem_betas(c);
  std::vector<WebCase> cases(family.size() * betas.size());
  parallel_for(cases.size(), c.worker_count(), [&](std::size_t i) {
    cases[i] = web_case(family[i / betas.size()], betas[i % betas.size()], c);
  });
  bool pass = true;
  Json rows = Json::array();
  for (auto& w : cases) {
    pass = pass && w.chain_ok;
    rows.push_back(std::move(w.json));
  }
  return {"web", pass,
          Json{{"suite", "web"}, {"pass", pass}, {"resolution", resolution_string(c.resolution)}, {"cases", rows}}};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"geometry", "radial", "theorem", "bounds", "shape-derivative", "web"};
  return names;
}

SuiteResult run_suite(const std::string& name, const RunConfig& config) {
  if (name == "geometry") return geometry_suite(config);
  if (name == "radial") return radial_suite(config);
  if (name == "theorem") return theorem_suite(config);
  if (name == "bounds") return bounds_suite(config);
  if (name == "shape-derivative") return shape_derivative_suite(config);
  if (name == "web") return web_suite(config);
  throw UsageError("unknown suite '" + name + "'");
}

}  // namespace annulus::cli
