#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "annulus/errors.hpp"
#include "annulus/geometry.hpp"

using namespace annulus;

namespace {

constexpr double kPi = std::numbers::pi;

// Periodic trapezoid rule on the ellipse arc-length integrand: spectrally accurate.
double ellipse_perimeter_oracle(double a, double b) {
  const int n = 4000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * kPi * k / n;
    sum += std::hypot(a * std::sin(t), b * std::cos(t));
  }
  return sum * 2.0 * kPi / n;
}

double fan_area(std::span<const Vec2> v) {
  double area = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    area += 0.5 * cross(v[i] - v[0], v[i + 1] - v[0]);
  }
  return area;
}

}  // namespace

TEST(PolygonArea, UnitSquare) { EXPECT_NEAR(polygon_area(ConvexPolygon::rectangle(1, 1)), 1.0, 1e-15); }

TEST(PolygonArea, RegularHexagon) {
  EXPECT_NEAR(polygon_area(ConvexPolygon::regular(6, 1.0)), 3.0 * std::sqrt(3.0) / 2.0, 1e-14);
}

TEST(PolygonArea, RandomHeptagonMatchesFanTriangulation) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  std::vector<double> angles(7);
  for (auto& a : angles) a = u(rng);
  std::sort(angles.begin(), angles.end());
  std::vector<Vec2> v;
  for (double a : angles) v.push_back({1.3 * std::cos(a) + 0.2, 0.7 * std::sin(a) - 0.1});
  const ConvexPolygon p(v);
  EXPECT_NEAR(polygon_area(p), fan_area(v), 1e-14);
}

TEST(PolygonArea, DegenerateRejected) {
  EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {2, 0}}), InvalidGeometry);
  EXPECT_THROW(ConvexPolygon({{0, 0}, {0, 1}, {1, 0}}), InvalidGeometry);  // clockwise
}

TEST(Quermass, SquareRectangleAndDisk) {
  auto q = quermassintegrals_2d(ConvexPolygon::rectangle(1, 1));
  EXPECT_NEAR(q.w0, 1.0, 1e-15);
  EXPECT_NEAR(q.w1, 2.0, 1e-15);
  EXPECT_NEAR(q.w2, kPi, 1e-15);
  q = quermassintegrals_2d(ConvexPolygon::rectangle(2, 1));
  EXPECT_NEAR(q.w0, 2.0, 1e-15);
  EXPECT_NEAR(q.w1, 3.0, 1e-15);
  q = quermassintegrals_2d(ConvexPolygon::regular(4096, 1.0));
  EXPECT_NEAR(q.w0, kPi, 1e-5);
  EXPECT_NEAR(q.w1, kPi, 1e-5);
  EXPECT_NEAR(q.w2, kPi, 1e-15);
}

TEST(ShellQuermass, BallValues) {
  EXPECT_NEAR(shell_quermass(3, 2.0, 1), 4.0 * kPi / 3.0 * 4.0, 1e-12);
  EXPECT_NEAR(shell_quermass(2, 1.0, 2), kPi, 1e-15);
  EXPECT_NEAR(shell_quermass(3, 1.5, 0), 4.5 * kPi, 1e-12);
  EXPECT_THROW(shell_quermass(3, 1.0, 4), RangeError);
}

TEST(Inradius, Examples) {
  EXPECT_NEAR(inradius(ConvexPolygon::rectangle(1, 1)), 0.5, 1e-12);
  EXPECT_NEAR(inradius(ConvexPolygon({{0, 0}, {2, 0}, {1, std::sqrt(3.0)}})), 1.0 / std::sqrt(3.0), 1e-12);
  const ConvexPolygon r = ConvexPolygon::rectangle(3, 1);
  const double rho = inradius(r);
  EXPECT_NEAR(rho, 0.5, 1e-12);
  const double ratio = r.area() / r.perimeter();
  EXPECT_NEAR(ratio, 3.0 / 8.0, 1e-15);
  EXPECT_LE(rho / 2.0, ratio);
  EXPECT_LE(ratio, rho);
}

TEST(InnerParallel, SquareAndIdentity) {
  const ConvexPolygon sq = ConvexPolygon::rectangle(1, 1);
  const ConvexPolygon e = inner_parallel(sq, 0.25);
  EXPECT_NEAR(e.perimeter(), 2.0, 1e-12);
  EXPECT_NEAR(e.area(), 0.25, 1e-12);
  const ConvexPolygon same = inner_parallel(sq, 0.0);
  EXPECT_NEAR(same.area(), 1.0, 1e-15);
  EXPECT_THROW(inner_parallel(sq, 0.5), EmptyBody);
}

TEST(InnerParallel, HexagonLevelSetSampling) {
  const ConvexPolygon hex = ConvexPolygon::regular(6, 1.0);
  const double delta = 0.2;
  const ConvexPolygon e = inner_parallel(hex, delta);
  // Every sampled point of the eroded boundary sits at distance delta from the original boundary.
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (int k = 0; k < 16; ++k) {
      const Vec2 p = e.vertex(i) + (k / 16.0) * (e.vertex(i + 1) - e.vertex(i));
      EXPECT_NEAR(hex.boundary_distance(p), delta, 1e-12);
    }
  }
  // Tangential polygon: erosion is a homothety with ratio (rho - delta) / rho.
  const double rho = std::sqrt(3.0) / 2.0;
  EXPECT_NEAR(e.perimeter(), 6.0 * (rho - delta) / rho, 1e-12);
  EXPECT_LT(e.perimeter(), inner_parallel(hex, 0.1).perimeter());
}

TEST(OuterParallel, Steiner) {
  const ConvexPolygon sq = ConvexPolygon::rectangle(1, 1);
  auto m = outer_parallel_measures(sq, 1.0);
  EXPECT_NEAR(m.area, 1.0 + 4.0 + kPi, 1e-12);
  EXPECT_NEAR(m.perimeter, 4.0 + 2.0 * kPi, 1e-12);
  m = outer_parallel_measures(sq, 0.0);
  EXPECT_NEAR(m.area, 1.0, 1e-15);
  EXPECT_NEAR(m.perimeter, 4.0, 1e-15);
  m = outer_parallel_measures(ConvexPolygon::regular(4096, 1.0), 0.5);
  EXPECT_NEAR(m.area, kPi * 2.25, 1e-4);
  EXPECT_NEAR(m.perimeter, 3.0 * kPi, 1e-4);
}

TEST(DistanceToBoundary, Examples) {
  const AnnularDomain shell(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}));
  const Vec2 x{1.4 * std::cos(0.3), 1.4 * std::sin(0.3)};
  EXPECT_NEAR(distance_to_boundary(x, shell, Side::outer), 0.6, 1e-14);
  EXPECT_NEAR(distance_to_boundary(x, shell, Side::inner), 0.4, 1e-14);
  EXPECT_NEAR(distance_to_boundary({0, 2}, shell, Side::outer), 0.0, 1e-15);
  EXPECT_THROW(distance_to_boundary({0, 0}, shell, Side::outer), DomainError);
  EXPECT_THROW(distance_to_boundary({3, 0}, shell, Side::outer), DomainError);

  const AnnularDomain ell(BoundaryCurve(Ellipse{{0, 0}, 2, 1}), BoundaryCurve(Circle{{0, 0}, 0.5}));
  EXPECT_NEAR(distance_to_boundary({0, 0.7}, ell, Side::outer), 0.3, 1e-12);
}

TEST(AleksandrovFenchel, Examples) {
  // Direct evaluation of (W1 / omega_2) - (W0 / omega_2)^(1/2).
  EXPECT_NEAR(aleksandrov_fenchel_margin(ConvexPolygon::rectangle(1, 1)), 2.0 / kPi - std::sqrt(1.0 / kPi), 1e-14);
  EXPECT_NEAR(aleksandrov_fenchel_margin(ConvexPolygon::rectangle(1, 1)), 0.0724302, 1e-7);
  EXPECT_NEAR(aleksandrov_fenchel_margin(ConvexPolygon::rectangle(4, 0.25)), 4.25 / kPi - std::sqrt(1.0 / kPi), 1e-14);
  EXPECT_NEAR(aleksandrov_fenchel_margin(ConvexPolygon::rectangle(4, 0.25)), 0.788627, 1e-6);
  const double disk = aleksandrov_fenchel_margin(ConvexPolygon::regular(4096, 1.0));
  EXPECT_GE(disk, 0.0);
  EXPECT_LT(disk, 1e-6);
}

TEST(ClassS, ConcentricAndEccentric) {
  const AnnularDomain con(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}));
  auto d = class_s_data(con);
  EXPECT_NEAR(d.r_inner, 1.0, 1e-14);
  EXPECT_NEAR(d.r_outer, 2.0, 1e-14);
  EXPECT_NEAR(d.residual, 0.0, 1e-12);
  const AnnularDomain ecc(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1}));
  d = class_s_data(ecc);
  EXPECT_NEAR(d.r_inner, 1.0, 1e-14);
  EXPECT_NEAR(d.r_outer, 2.0, 1e-14);
  EXPECT_NEAR(d.residual, 0.0, 1e-12);
}

TEST(ClassS, EllipseWithCircularHoleResidual) {
  const AnnularDomain dom(BoundaryCurve(Ellipse{{0, 0}, 2, 1}), BoundaryCurve(Circle{{0, 0}, 0.5}));
  const double p = ellipse_perimeter_oracle(2, 1);
  const double expected = (4.0 * kPi * (2.0 * kPi) - p * p) / (4.0 * kPi);
  const auto d = class_s_data(dom);
  EXPECT_NEAR(d.residual, expected, 1e-10);
  EXPECT_LT(d.residual, 0.0);
  EXPECT_NEAR(ellipse_perimeter(2, 1), p, 1e-11);
}

TEST(ScaleHole, EllipseRectangle) {
  const BoundaryCurve outer(Ellipse{{0, 0}, 2, 1});
  const BoundaryCurve hole(ConvexPolygon::rectangle(1.5, 0.1));
  const double p = ellipse_perimeter_oracle(2, 1);
  const double d_out = p * p - 4.0 * kPi * (2.0 * kPi);
  const double d_hole = 3.2 * 3.2 - 4.0 * kPi * 0.15;
  EXPECT_NEAR(d_hole, 8.35504, 1e-5);
  const HoleScaling s = scale_hole_to_class_s(outer, hole);
  ASSERT_TRUE(s.scale.has_value());
  EXPECT_NEAR(*s.scale, std::sqrt(d_out / d_hole), 1e-10);
  ASSERT_TRUE(s.hole.has_value());
  EXPECT_GT(s.gap, 0.0);
  const AnnularDomain dom(outer, *s.hole);
  EXPECT_LT(class_s_data(dom).relative_residual(), 1e-10);
}

TEST(ScaleHole, CircleAndSimilarSquares) {
  const HoleScaling c = scale_hole_to_class_s(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1}));
  EXPECT_FALSE(c.scale.has_value());
  EXPECT_NEAR(c.max_feasible_scale, 2.0, 1e-6);
  EXPECT_THROW(scale_hole_to_class_s(BoundaryCurve(ConvexPolygon::rectangle(2, 2)),
                                     BoundaryCurve(ConvexPolygon::rectangle(1, 1))),
               Error);
}

TEST(CurveGrammar, RoundTripAndErrors) {
  const BoundaryCurve c = parse_curve("circle 0.5 0 1");
  ASSERT_NE(c.circle(), nullptr);
  EXPECT_EQ(c.circle()->center, (Vec2{0.5, 0}));
  const BoundaryCurve e = parse_curve("ellipse 0 0 2 1");
  ASSERT_NE(e.ellipse(), nullptr);
  const BoundaryCurve p = parse_curve("polygon 0 0 1 0 1 1 0 1");
  ASSERT_NE(p.polygon(), nullptr);
  EXPECT_NEAR(p.area(), 1.0, 1e-15);
  EXPECT_EQ(parse_curve(p.to_spec()).polygon()->size(), 4u);
  EXPECT_THROW(parse_curve("square 1"), Error);
  EXPECT_THROW(parse_curve("circle 0 0"), Error);
  EXPECT_THROW(parse_curve("circle 0 0 -1"), Error);
}

TEST(AnnularDomain, ContainmentChecked) {
  EXPECT_THROW(AnnularDomain(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{1.5, 0}, 1})), Error);
  const AnnularDomain d(BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1}));
  EXPECT_NEAR(d.min_gap(), 0.5, 1e-6);
  EXPECT_NEAR(d.area(), 3.0 * kPi, 1e-12);
}
