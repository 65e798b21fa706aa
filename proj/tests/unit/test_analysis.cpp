#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "../support/oracles.hpp"
#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"

using namespace annulus;

namespace {
constexpr double kPi = std::numbers::pi;

AnnularDomain concentric() { return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}), Vec2{0, 0}}; }
AnnularDomain eccentric() {
  return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1}), Vec2{0.5, 0}};
}
}  // namespace

TEST(InequalityReport, MarginAndTolerance) {
  auto r = make_report("x", 1.0, 2.0, 1e-8, "test");
  EXPECT_DOUBLE_EQ(r.margin, 1.0);
  EXPECT_TRUE(r.pass);
  r = make_report("x", 2.0, 2.0 - 1e-9, 1e-8, "test");
  EXPECT_TRUE(r.pass);
  r = make_report("x", 2.0, 1.9, 1e-8, "test");
  EXPECT_FALSE(r.pass);
}

TEST(ShapeDerivative, RigidTranslationOfShellVanishes) {
  const auto field = PerturbationField::translation(FieldTarget::both, {1, 0});
  const auto fem = solve_domain(concentric(), 1.0, 32, 128);
  EXPECT_NEAR(shape_derivative_formula(concentric(), 1.0, field, fem), 0.0, 1e-10);
  const auto fd = shape_derivative_fd(concentric(), 1.0, field, 1e-2, {32, 128});
  EXPECT_NEAR(fd.value, 0.0, 1e-8);
}

TEST(ShapeDerivative, ShellStationaryUnderModeTwo) {
  const auto c = shape_derivative_check(concentric(), 1.0, PerturbationField::normal_fourier(FieldTarget::outer, 2, 1.0),
                                        1e-2, {32, 128}, 10.0);
  EXPECT_TRUE(c.pass);
  EXPECT_LE(std::abs(c.formula), 10.0 * c.fd.noise);
}

TEST(ShapeDerivative, EccentricHoleTranslationMatchesFd) {
  const auto c = shape_derivative_check(eccentric(), 1.0, PerturbationField::translation(FieldTarget::inner, {1, 0}),
                                        1e-2, {32, 128});
  EXPECT_TRUE(c.fd_resolved);
  EXPECT_LE(c.relative_error, 0.05);
  // Second order in t: the differences shrink as the step is halved.
  ASSERT_EQ(c.fd.values.size(), 3u);
  EXPECT_LT(std::abs(c.fd.values[1] - c.fd.values[2]), std::abs(c.fd.values[0] - c.fd.values[1]));
}

TEST(ShapeDerivative, OuterRadialModeMatchesFd) {
  // Uniform outward normal motion of the outer circle.
  const auto c = shape_derivative_check(concentric(), 1.0, PerturbationField::normal_fourier(FieldTarget::outer, 0, 1.0),
                                        1e-2, {32, 128});
  EXPECT_LE(c.relative_error, 0.05);
  EXPECT_LT(c.formula, 0.0);  // enlarging the outer body lowers the eigenvalue
}

TEST(ShapeDerivative, PolygonRejected) {
  const NamedDomain m = ellipse_rectangle_member(2, 1, 1.5, 0.1);
  const auto fem = solve_domain(m.domain, 1.0, 16, 64);
  EXPECT_THROW(shape_derivative_formula(m.domain, 1.0, PerturbationField::translation(FieldTarget::inner, {1, 0}), fem),
               CurvatureUnavailable);
}

TEST(KuttlerBounds, ShellPositiveMargins) {
  const auto reports = kuttler_bounds(ShellSpec{2, 1.0, 2.0}, 1.0);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << r.name;
    EXPECT_GT(r.margin, 0.0) << r.name;
  }
}

TEST(KuttlerBounds, LargeBetaGapIsTiny) {
  const auto reports = kuttler_bounds(ShellSpec{2, 1.0, 2.0}, 1e3);
  for (const auto& r : reports) EXPECT_TRUE(r.pass) << r.name;
  const double gap = 1.0 / solve_shell(ShellSpec{2, 1, 2}, 1e3).lambda - 1.0 / oracle::shell2d_lambda(1, 2, kInfiniteBeta);
  EXPECT_GT(gap, 0.0);
  EXPECT_LE(gap, 3.0 * kPi / (1e3 * 4.0 * kPi));
}

TEST(KuttlerBounds, FemOnEccentric) {
  for (const auto& r : kuttler_bounds(eccentric(), 1.0, {32, 128})) EXPECT_TRUE(r.pass) << r.name;
}

TEST(PolygonInequalities, SquareAndRandom) {
  for (const auto& r : polygon_inequalities(ConvexPolygon::rectangle(3, 1), "rect")) EXPECT_TRUE(r.pass) << r.name;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ConvexPolygon p = random_convex_polygon(s);
    // Independent recomputation of the AF margin from area and perimeter.
    const double af = p.perimeter() / (2 * kPi) - std::sqrt(p.area() / kPi);
    EXPECT_GE(af, 0.0);
    EXPECT_NEAR(aleksandrov_fenchel_margin(p), af, 1e-12);
    for (const auto& r : polygon_inequalities(p, "random")) EXPECT_TRUE(r.pass) << r.name << " seed " << s;
  }
}

TEST(RandomPolygon, DeterministicAndNormalized) {
  for (std::uint64_t s : {0ULL, 7ULL, 12345ULL}) {
    const ConvexPolygon a = random_convex_polygon(s);
    const ConvexPolygon b = random_convex_polygon(s);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.vertex(i), b.vertex(i));
    EXPECT_GE(a.size(), 3u);
    EXPECT_LE(a.size(), 12u);
    EXPECT_NEAR(inradius(a), 1.0, 1e-9);
  }
}

TEST(BetaLimits, GridAndShell) {
  const auto grid = beta_grid(1);
  ASSERT_EQ(grid.size(), 8u);
  EXPECT_DOUBLE_EQ(grid.front(), 1e-3);
  EXPECT_DOUBLE_EQ(grid.back(), 1e4);
  const auto r = beta_limits_check(ShellSpec{2, 1.0, 2.0});
  EXPECT_TRUE(r.strictly_increasing);
  EXPECT_LE(r.dd_gap, r.dd_bound);
  EXPECT_NEAR(r.lambda_nd, oracle::shell2d_lambda(1, 2, 0), 1e-9);
  EXPECT_NEAR(r.lambda_dd, oracle::shell2d_lambda(1, 2, kInfiniteBeta), 1e-9);
  // The Neumann end sits about dlambda/dbeta(0) * 1e-3 above lambda_ND.
  EXPECT_NEAR(r.nd_relative_gap, 1.19e-3, 0.01e-3);
  const auto again = beta_limits_check(ShellSpec{2, 1.0, 2.0});
  EXPECT_EQ(again.lambdas, r.lambdas);
}

TEST(BetaLimits, FemOnEccentric) {
  const auto r = beta_limits_check(eccentric(), {16, 64});
  EXPECT_TRUE(r.nondecreasing);
  EXPECT_LE(r.dd_gap, r.dd_bound);
}

TEST(BetaDerivative, MatchesFiniteDifference) {
  const auto c = beta_derivative_check(eccentric(), 1.0, {16, 64});
  EXPECT_LE(c.relative_error, 1e-4);
}

TEST(Families, EccentricAndStandardSuite) {
  const auto fam = eccentric_family(1.0, 2.0, {0.1, 0.5, 0.9}, 0.1);
  ASSERT_EQ(fam.size(), 3u);
  EXPECT_NEAR(fam[2].domain.inner().circle()->center.x, 0.9 * 0.9, 1e-15);
  const auto suite = standard_suite();
  EXPECT_EQ(suite.size(), 8u);
  for (const auto& m : suite) EXPECT_LT(class_s_data(m.domain).relative_residual(), 1e-8) << m.name;
}

TEST(TheoremSweep, EccentricFamilyPasses) {
  const auto fam = eccentric_family(1.0, 2.0, {0.1, 0.5, 0.9}, 0.1);
  const auto reports = main_theorem_sweep(fam, 1.0, {32, 128}, 2);
  ASSERT_EQ(reports.size(), 3u);
  for (const auto& r : reports) {
    EXPECT_TRUE(r.pass) << r.name;
    EXPECT_GT(r.margin, 0.0) << r.name;
  }
}

TEST(TheoremSweep, ConcentricWithinDiscretization) {
  const auto reports = main_theorem_sweep({{"concentric", concentric()}}, 1.0, {32, 128});
  ASSERT_EQ(reports.size(), 1u);
  EXPECT_TRUE(reports[0].pass);
  EXPECT_LE(std::abs(reports[0].margin), reports[0].tolerance);
}

TEST(TheoremSweep, RejectsNonClassS) {
  const AnnularDomain d(BoundaryCurve(Ellipse{{0, 0}, 2, 1}), BoundaryCurve(Circle{{0, 0}, 0.5}));
  EXPECT_THROW(main_theorem_sweep({{"ellipse", d}}, 1.0, {16, 64}), Infeasible);
}

TEST(Structure, SingleCriticalPointAndArgmax) {
  const auto s = eigenfunction_structure(1.0, 2.0, 1.0, {32, 128});
  EXPECT_EQ(s.critical_points, 1);
  EXPECT_LE(std::abs(s.argmax_radius - s.r_bar), 2.0 * s.cell_size);
  EXPECT_NEAR(s.r_bar, oracle::shell2d_rbar(1, 2, 1), 1e-8);
}
