// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"
#include "annulus/fem.hpp"
#include "annulus/parallel.hpp"
#include "annulus/radial.hpp"
#include "annulus/webfunc.hpp"

using namespace annulus;

namespace {

constexpr double kPi = std::numbers::pi;
const std::vector<double> kBetas = {0.1, 1.0, 10.0};
const Resolution kTheoremRes{64, 256};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

AnnularDomain concentric() { return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}), Vec2{0, 0}}; }

std::vector<NamedDomain> theorem_family() {
  std::vector<NamedDomain> fam = {{"concentric", concentric()}};
  for (auto& m : eccentric_family(1.0, 2.0, {0.1, 0.3, 0.5, 0.7, 0.9}, 0.1)) fam.push_back(std::move(m));
  fam.push_back(ellipse_rectangle_member(2, 1, 1.5, 0.1));
  fam.push_back(ellipse_rectangle_member(1.8, 1.2, 1.0, 0.2));
  return fam;
}

ShellSpec matching_shell(const AnnularDomain& d) {
  const ClassSData cs = class_s_data(d);
  return ShellSpec{2, cs.r_inner, cs.r_outer};
}

double reference_lambda(const ShellSpec& s, double beta) { return oracle::shell2d_lambda(s.r_inner, s.r_outer, beta); }

// Criterion 4 results reused by criterion 5.
struct TheoremCase {
  std::string name;
  double beta = 0.0;
  FemEstimate fem;
  double lambda_shell = 0.0;
};
std::vector<TheoremCase> g_theorem;

Outcome radial_oracles() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20241015);
  std::uniform_int_distribution<int> dim(2, 4);
  std::uniform_real_distribution<double> r1d(0.5, 2.0), width(0.3, 2.0), logb(-2.0, 2.0);
  double worst_fd = 0.0, worst_3d = 0.0;
  for (int i = 0; i < 25; ++i) {
    const int n = dim(rng);
    const double r1 = r1d(rng), r2 = r1 + width(rng), beta = std::pow(10.0, logb(rng));
    const ShellSpec shell{n, r1, r2};
    const double lam = solve_shell(shell, beta).lambda;
    worst_fd = std::max(worst_fd, std::abs(lam - solve_shell_fd(shell, beta, 20000)) / lam);
    if (n == 3) worst_3d = std::max(worst_3d, std::abs(lam - oracle::shell3d_lambda(r1, r2, beta)) / lam);
  }
  const double secs = seconds_since(t0);
  return {worst_fd <= 1e-6 && worst_3d <= 1e-9 && secs < 30.0,
          fmt("max rel vs FD %.2e (<=1e-6), vs closed form %.2e (<=1e-9), %.1f s (<30)", worst_fd, worst_3d, secs)};
}

Outcome dirichlet_anchor() {
  const double lam = solve_shell(ShellSpec{3, 1.0, 2.0}, kInfiniteBeta).lambda;
  const double rel = std::abs(lam - kPi * kPi) / (kPi * kPi);
  return {rel <= 1e-9, fmt("lambda %.15g, rel err %.2e (<=1e-9)", lam, rel)};
}

Outcome fem_convergence() {
  const auto t0 = Clock::now();
  const double ref = oracle::shell2d_lambda(1, 2, 1.0);
  const auto study = convergence_study(concentric(), 1.0, {{16, 64}, {32, 128}, {64, 256}, {128, 512}}, ref);
  const double finest = study.rows.back().error / ref;
  const double secs = seconds_since(t0);
  return {study.order >= 1.8 && study.order <= 2.2 && finest <= 1e-3 && secs < 120.0,
          fmt("order %.3f in [1.8,2.2], finest rel err %.2e (<=1e-3), %.1f s (<120)", study.order, finest, secs)};
}

Outcome theorem_sweep() {
  const auto t0 = Clock::now();
  const auto fam = theorem_family();
  g_theorem.assign(fam.size() * kBetas.size(), {});
  parallel_for(g_theorem.size(), default_thread_count(), [&](std::size_t i) {
    const NamedDomain& m = fam[i / kBetas.size()];
    const double beta = kBetas[i % kBetas.size()];
    g_theorem[i] = {m.name, beta, fem_estimate(m.domain, beta, kTheoremRes),
                    reference_lambda(matching_shell(m.domain), beta)};
  });
  int failures = 0;
  double worst = INFINITY, concentric_worst = -INFINITY;
  for (const auto& c : g_theorem) {
    const double margin = c.lambda_shell + 2.0 * c.fem.error - c.fem.lambda;
    if (margin < 0.0) ++failures;
    if (c.name == "concentric") {
      const double excess = std::abs(c.fem.lambda - c.lambda_shell) - 2.0 * c.fem.error;
      concentric_worst = std::max(concentric_worst, excess);
      if (excess > 0.0) ++failures;
    } else {
      worst = std::min(worst, margin);
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 600.0,
          fmt("%zu cases, %d failing, min non-concentric margin %.3g, concentric |diff|-2err %.2e, %.1f s (<600)",
              g_theorem.size(), failures, worst, concentric_worst, secs)};
}

Outcome web_chain() {
  const auto fam = theorem_family();
  struct Row {
    bool continuous = false, lower = false, upper = false;
    double rq = 0.0;
  };
  std::vector<Row> rows(g_theorem.size());
  parallel_for(rows.size(), default_thread_count(), [&](std::size_t i) {
    const NamedDomain& m = fam[i / kBetas.size()];
    const TheoremCase& c = g_theorem[i];
    const WebFunction web(m.domain, solve_shell(matching_shell(m.domain), c.beta));
    const double rq = rayleigh_quotient(web, c.beta, 256, true).value;
    rows[i] = {web.continuous(), c.fem.lambda - 2.0 * c.fem.error <= rq, rq <= 1.02 * c.lambda_shell, rq};
  });
  int discontinuous = 0, lower_fail = 0, upper_fail = 0;
  double concentric_rel = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    discontinuous += !rows[i].continuous;
    lower_fail += !rows[i].lower;
    upper_fail += !rows[i].upper;
    if (g_theorem[i].name == "concentric") {
      concentric_rel = std::max(concentric_rel, std::abs(rows[i].rq - g_theorem[i].lambda_shell) /
                                                    g_theorem[i].lambda_shell);
    }
  }
  const bool pass = discontinuous == 0 && lower_fail == 0 && upper_fail == 0 && concentric_rel <= 1e-6;
  return {pass, fmt("%zu cases: %d not certified continuous, %d below FEM, %d above 1.02 shell; "
                    "concentric R(w) rel err %.2e (<=1e-6)",
                    rows.size(), discontinuous, lower_fail, upper_fail, concentric_rel)};
}

Outcome beta_derivative() {
  const std::vector<AnnularDomain> domains = {concentric(), eccentric_family(1, 2, {0.5}, 0.1)[0].domain,
                                              ellipse_rectangle_member(2, 1, 1.5, 0.1).domain};
  const Resolution res{32, 128};
  const double beta = 1.0, h = 1e-4;
  double worst = 0.0;
  for (const auto& d : domains) {
    const double formula = solve_domain(d, beta, res.n_radial, res.n_angular).beta_derivative;
    const double fd = (solve_domain(d, beta + h, res.n_radial, res.n_angular).lambda_h -
                       solve_domain(d, beta - h, res.n_radial, res.n_angular).lambda_h) /
                      (2 * h);
    worst = std::max(worst, std::abs(formula - fd) / std::abs(fd));
  }
  return {worst <= 1e-4, fmt("max rel diff %.2e over 3 domains (<=1e-4)", worst)};
}

Outcome shape_derivative() {
  const auto ecc = eccentric_family(1, 2, {0.5}, 0.1)[0].domain;
  const auto trans = shape_derivative_check(ecc, 1.0, PerturbationField::translation(FieldTarget::inner, {1, 0}), 1e-2,
                                            {64, 256});
  const auto mode2 = shape_derivative_check(concentric(), 1.0,
                                            PerturbationField::normal_fourier(FieldTarget::outer, 2, 1.0), 1e-2,
                                            {64, 256}, 10.0);
  const bool stationary = std::abs(mode2.formula) <= 10.0 * mode2.fd.noise;
  return {trans.relative_error <= 0.05 && trans.fd_resolved && stationary,
          fmt("translation formula %.6g vs FD %.6g (rel %.2e <= 5%%); mode-2 |formula| %.2e vs 10x noise %.2e",
              trans.formula, trans.fd.value, trans.relative_error, std::abs(mode2.formula), 10.0 * mode2.fd.noise)};
}

bool recheck_polygon(const ConvexPolygon& p) {
  // AF and pmi from area, perimeter and a certified inscribed disk.
  const Vec2 c = chebyshev_center(p);
  double rho = INFINITY;
  const auto v = p.vertices();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i], b = v[(i + 1) % v.size()];
    const Vec2 e{b.x - a.x, b.y - a.y};
    rho = std::min(rho, cross(e, Vec2{c.x - a.x, c.y - a.y}) / norm(e));
  }
  const double tol = 1e-8 * p.scale();
  const double ratio = p.area() / p.perimeter();
  const double af = p.perimeter() / (2 * kPi) - std::sqrt(p.area() / kPi);
  return std::abs(rho - inradius(p)) <= 1e-9 * p.scale() && ratio >= rho / 2 - tol && ratio <= rho + tol &&
         af >= -tol;
}

Outcome bounds_suite() {
  int failures = 0, checked = 0;
  double min_margin = INFINITY;
  auto take = [&](const std::vector<InequalityReport>& reports) {
    for (const auto& r : reports) {
      ++checked;
      failures += !r.pass;
      min_margin = std::min(min_margin, r.margin);
    }
  };
  // FEM-based part.
  const auto suite = standard_suite();
  std::vector<std::vector<InequalityReport>> fem_reports(suite.size());
  parallel_for(suite.size(), default_thread_count(),
               [&](std::size_t i) { fem_reports[i] = kuttler_bounds(suite[i].domain, 1.0, {32, 128}); });
  for (const auto& r : fem_reports) take(r);

  const auto t0 = Clock::now();
  for (double beta : kBetas) {
    take(kuttler_bounds(ShellSpec{2, 1.0, 2.0}, beta));
    const double lam = oracle::shell2d_lambda(1, 2, beta), dd = oracle::shell2d_lambda(1, 2, kInfiniteBeta);
    ++checked;
    if (!(lam <= dd && 1 / lam - 1 / dd <= 3 * kPi / (beta * 4 * kPi))) ++failures;
  }
  for (const auto& m : suite) {
    if (const ConvexPolygon* p = m.domain.inner().polygon()) {
      take(polygon_inequalities(*p, m.name));
      ++checked;
      failures += !recheck_polygon(*p);
    }
  }
  for (int i = 0; i < 100; ++i) {
    const ConvexPolygon p = random_convex_polygon(1000003ULL + static_cast<std::uint64_t>(i));
    take(polygon_inequalities(p, "random"));
    ++checked;
    failures += !recheck_polygon(p);
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 60.0,
          fmt("%d checks, %d failing, min margin %.3g, %.2f s excluding FEM (<60)", checked, failures, min_margin, secs)};
}

Outcome beta_limits() {
  const auto r = beta_limits_check(ShellSpec{2, 1.0, 2.0});
  const double nd = oracle::shell2d_lambda(1, 2, 0.0), dd = oracle::shell2d_lambda(1, 2, kInfiniteBeta);
  const double nd_gap = std::abs(r.lambdas.front() - nd) / nd;
  const double dd_gap = 1.0 / r.lambdas.back() - 1.0 / dd;
  const double dd_bound = 3 * kPi / (r.betas.back() * 4 * kPi);
  bool increasing = true;
  for (std::size_t i = 1; i < r.lambdas.size(); ++i) increasing = increasing && r.lambdas[i] > r.lambdas[i - 1];
  return {nd_gap <= 1e-3 && dd_gap <= dd_bound && dd_gap >= 0.0 && increasing,
          fmt("ND rel gap %.3e (<=1e-3), DD gap %.3e (<=%.3e), strictly increasing %s", nd_gap, dd_gap, dd_bound,
              increasing ? "yes" : "no")};
}

Outcome structure() {
  const auto s = eigenfunction_structure(1.0, 2.0, 1.0, kTheoremRes);
  const double rbar = oracle::shell2d_rbar(1, 2, 1.0);
  const double cells = std::abs(s.argmax_radius - rbar) / s.cell_size;
  // Sign changes of the closed-form profile derivative.
  const auto b = oracle::shell2d(1, 2, 1.0);
  int changes = 0;
  for (int i = 1; i <= 2000; ++i) {
    if ((b.dphi(1 + (i - 1) / 2000.0) > 0) != (b.dphi(1 + i / 2000.0) > 0)) ++changes;
  }
  return {cells <= 2.0 && s.critical_points == 1 && changes == 1,
          fmt("argmax %.5f vs R_bar %.5f (%.2f cells <= 2), critical points %d (closed form %d)", s.argmax_radius, rbar,
              cells, s.critical_points, changes)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"radial oracle agreement", radial_oracles},
      {"Dirichlet limit anchor", dirichlet_anchor},
      {"FEM convergence", fem_convergence},
      {"comparison theorem sweep", theorem_sweep},
      {"web-function chain", web_chain},
      {"beta-derivative identity", beta_derivative},
      {"shape derivative", shape_derivative},
      {"bounds suite", bounds_suite},
      {"beta limits", beta_limits},
      {"eigenfunction structure", structure},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
