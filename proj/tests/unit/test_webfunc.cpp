#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"
#include "annulus/webfunc.hpp"

using namespace annulus;

namespace {
constexpr double kPi = std::numbers::pi;

AnnularDomain concentric() { return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}), Vec2{0, 0}}; }
AnnularDomain eccentric() {
  return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1}), Vec2{0.5, 0}};
}
RadialEigenResult shell_profile(double beta) { return solve_shell(ShellSpec{2, 1.0, 2.0}, beta); }

WebFunction web_for(const AnnularDomain& d, double beta) {
  const ClassSData cs = class_s_data(d);
  return WebFunction(d, solve_shell(ShellSpec{2, cs.r_inner, cs.r_outer}, beta));
}
}  // namespace

TEST(FindSplit, ConcentricIsCriticalRadius) {
  const auto rad = shell_profile(1.0);
  EXPECT_NEAR(find_split(concentric(), rad), rad.r_bar - 1.0, 1e-9);
}

TEST(FindSplit, EccentricAreaMatch) {
  const WebFunction web(eccentric(), shell_profile(1.0));
  EXPECT_GT(web.s_star(), 0.0);
  EXPECT_NEAR(web.inner_area(), web.target_area(), 1e-6 * web.target_area());
  const double r_bar = web.radial().r_bar;
  EXPECT_NEAR(web.target_area(), kPi * (r_bar * r_bar - 1.0), 1e-12);
}

TEST(FindSplit, EllipseRectangleMember) {
  const NamedDomain m = ellipse_rectangle_member(2, 1, 1.5, 0.1);
  const WebFunction web = web_for(m.domain, 1.0);
  EXPECT_GT(web.s_star(), 0.0);
  EXPECT_NEAR(web.inner_area(), web.target_area(), 1e-6 * web.target_area());
  EXPECT_FALSE(web.outer_boundary_meets_inner_part());
}

TEST(FindSplit, RejectsDomainsOutsideClassS) {
  const AnnularDomain d(BoundaryCurve(Ellipse{{0, 0}, 2, 1}), BoundaryCurve(Circle{{0, 0}, 0.5}));
  EXPECT_THROW(find_split(d, shell_profile(1.0)), Infeasible);
}

TEST(EvaluateW, ShellIdentityAndBoundaryValues) {
  const WebFunction web(concentric(), shell_profile(1.0));
  EXPECT_TRUE(web.continuous());
  const auto& rad = web.radial();
  for (double r : {1.0, 1.2, 1.5, rad.r_bar, 1.8, 2.0}) {
    for (double a : {0.0, 1.0, 4.0}) {
      EXPECT_NEAR(evaluate_w(web, r * unit_direction(a)), rad.phi(r), 1e-10) << r;
    }
  }
  EXPECT_NEAR(evaluate_w(web, {0, 2}), rad.v_m, 1e-12);
  EXPECT_NEAR(evaluate_w(web, {-1, 0}), 0.0, 1e-14);
  EXPECT_THROW(evaluate_w(web, {0.2, 0}), DomainError);
  EXPECT_THROW(evaluate_w(web, {3, 0}), DomainError);
}

TEST(EvaluateW, RangeOnEccentric) {
  const WebFunction web(eccentric(), shell_profile(1.0));
  const double vM = web.radial().v_M;
  // The hole reaches within s* of the outer circle near (2, 0), so only the far side is pinned to v_m.
  EXPECT_TRUE(web.outer_boundary_meets_inner_part());
  EXPECT_NEAR(evaluate_w(web, {-2, 0}), web.radial().v_m, 1e-12);
  EXPECT_NEAR(evaluate_w(web, {0, 2}), web.radial().v_m, 1e-12);
  EXPECT_NEAR(evaluate_w(web, {-0.5, 0}), 0.0, 1e-14);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const Vec2 x{-2 + 4.0 * i / 39, -2 + 4.0 * j / 39};
      if (!eccentric().contains(x)) continue;
      const double w = evaluate_w(web, x);
      EXPECT_GE(w, 0.0);
      EXPECT_LE(w, vM * (1 + 1e-12));
    }
  }
}

TEST(RayleighQuotient, ShellEqualsEigenvalue) {
  for (double beta : {0.1, 1.0, 10.0}) {
    const WebFunction web(concentric(), shell_profile(beta));
    const RayleighParts q = rayleigh_quotient(web, beta, 256);
    EXPECT_NEAR(q.value, web.radial().lambda, 1e-6 * web.radial().lambda) << beta;
    EXPECT_NEAR(q.area, 3.0 * kPi, 1e-10);
  }
}

TEST(RayleighQuotient, UncertifiedWebRejected) {
  const WebFunction web(eccentric(), shell_profile(1.0));
  EXPECT_FALSE(web.continuous());
  EXPECT_THROW(rayleigh_quotient(web, 1.0, 128), NumericalFailure);
}

TEST(RayleighQuotient, EccentricSandwichAsComputed) {
  // The interface jump is reported separately; the numeric sandwich itself holds here.
  const WebFunction web(eccentric(), shell_profile(1.0));
  const double rq = rayleigh_quotient(web, 1.0, 256, true).value;
  const double fem = solve_domain(eccentric(), 1.0, 64, 256).lambda_h;
  EXPECT_LE(fem, rq);
  EXPECT_LE(rq, 1.02 * web.radial().lambda);
}

TEST(RayleighQuotient, ThreadCountDoesNotChangeResult) {
  const NamedDomain m = ellipse_rectangle_member(1.8, 1.2, 1.0, 0.2);
  const WebFunction web = web_for(m.domain, 1.0);
  const double one = rayleigh_quotient(web, 1.0, 128, true, 1).value;
  EXPECT_EQ(rayleigh_quotient(web, 1.0, 128, true, 4).value, one);
}

TEST(ComparisonCurves, ShellEquality) {
  const WebFunction web(concentric(), shell_profile(1.0));
  const ComparisonCurves c = comparison_curves(web, 16);
  ASSERT_EQ(c.rows.size(), 16u);
  EXPECT_TRUE(c.pass());
  for (const auto& row : c.rows) {
    EXPECT_NEAR(row.mu_i, row.eta_i, 1e-9);
    EXPECT_NEAR(row.mu_o, row.eta_o, 1e-9);
  }
  // t = 0: mu_o(0) = eta_o(0) = |M_o|.
  const double r_bar = web.radial().r_bar;
  EXPECT_NEAR(c.rows.front().mu_o, kPi * (4.0 - r_bar * r_bar), 1e-9);
}

TEST(ComparisonCurves, EccentricMeasureInequalities) {
  const WebFunction web(eccentric(), shell_profile(1.0));
  const ComparisonCurves c = comparison_curves(web, 16);
  EXPECT_LE(c.outer_measure_violation, c.tolerance);
  EXPECT_LE(c.inner_measure_violation, c.tolerance);
  EXPECT_THROW(comparison_curves(web, 1), RangeError);
}
