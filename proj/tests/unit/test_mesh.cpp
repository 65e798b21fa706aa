#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "annulus/analysis.hpp"
#include "annulus/errors.hpp"
#include "annulus/io.hpp"
#include "annulus/mesh.hpp"

using namespace annulus;

namespace {
constexpr double kPi = std::numbers::pi;

AnnularDomain concentric() { return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0, 0}, 1})}; }
AnnularDomain eccentric() { return {BoundaryCurve(Circle{{0, 0}, 2}), BoundaryCurve(Circle{{0.5, 0}, 1})}; }

// Shoelace area of a closed curve sampled densely: independent of the mesher.
double curve_area(const BoundaryCurve& c) {
  const auto pts = c.sample(20000);
  double a = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) a += 0.5 * cross(pts[i], pts[(i + 1) % pts.size()]);
  return a;
}
}  // namespace

TEST(MeshAnnular, StructuredCounts) {
  const Mesh m = mesh_annular(concentric(), 2, 8);
  EXPECT_EQ(m.node_count(), 24u);
  EXPECT_EQ(m.triangles.size(), 32u);
  EXPECT_EQ(m.boundary_edges.size(), 16u);
  EXPECT_FALSE(m.validate().has_value());
  // Inscribed octagons: area 4 sin(pi/4) (R2^2 - R1^2).
  EXPECT_NEAR(m.area(), 4.0 * std::sin(kPi / 4) * 3.0, 1e-12);
  EXPECT_NEAR(m.area(), 3.0 * kPi, 3.0 * kPi * 2.0 * kPi * kPi / 64.0);
}

TEST(MeshAnnular, AreaConvergesOnEccentric) {
  const AnnularDomain d = eccentric();
  const Mesh m = mesh_annular(d, 32, 128);
  const double exact = curve_area(d.outer()) - curve_area(d.inner());
  EXPECT_NEAR(m.area(), exact, 5e-3 * exact);
  EXPECT_FALSE(m.validate(&d).has_value());
}

TEST(MeshAnnular, BoundaryOrientationAndLengths) {
  const Mesh m = mesh_annular(concentric(), 8, 64);
  EXPECT_NEAR(m.boundary_length(Side::outer), 2 * 64 * 2 * std::sin(kPi / 64), 1e-12);
  EXPECT_NEAR(m.boundary_length(Side::inner), 64 * 2 * std::sin(kPi / 64), 1e-12);
  for (const auto& e : m.boundary_edges) {
    const Vec2 a = m.nodes[e.a], b = m.nodes[e.b];
    const Vec2 t = b - a;
    const Vec2 normal{t.y, -t.x};
    const Vec2 mid = 0.5 * (a + b);
    // Outward normal of the domain: away from the origin on the outer circle, toward it on the hole.
    const double s = dot(normal, mid);
    if (e.tag == Side::outer) EXPECT_GT(s, 0.0);
    else EXPECT_LT(s, 0.0);
  }
}

TEST(MeshAnnular, PolygonCornersAreNodes) {
  const NamedDomain member = ellipse_rectangle_member(2, 1, 1.5, 0.1);
  const Mesh m = mesh_annular(member.domain, 16, 128);
  EXPECT_FALSE(m.validate(&member.domain).has_value());
  for (Vec2 corner : member.domain.inner().polygon()->vertices()) {
    double best = 1e300;
    for (int j = 0; j < m.n_angular; ++j) best = std::min(best, norm(m.nodes[m.node(0, j)] - corner));
    EXPECT_LT(best, 1e-12);
  }
}

TEST(MeshAnnular, RejectsTooCoarse) {
  EXPECT_THROW(mesh_annular(concentric(), 1, 64), Error);
  EXPECT_THROW(mesh_annular(concentric(), 4, 7), Error);
}

TEST(MeshAnnular, Deterministic) {
  const Mesh a = mesh_annular(eccentric(), 8, 32);
  const Mesh b = mesh_annular(eccentric(), 8, 32);
  std::ostringstream sa, sb;
  write_mesh(sa, a);
  write_mesh(sb, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(MeshIo, RoundTrip) {
  const Mesh m = mesh_annular(eccentric(), 4, 16);
  std::ostringstream os;
  write_mesh(os, m);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "nodes 80 triangles 128 edges 32");
  std::istringstream is(os.str());
  const Mesh r = read_mesh(is);
  ASSERT_EQ(r.node_count(), m.node_count());
  for (std::size_t i = 0; i < m.node_count(); ++i) EXPECT_EQ(r.nodes[i], m.nodes[i]);
  EXPECT_EQ(r.triangles, m.triangles);
  ASSERT_EQ(r.boundary_edges.size(), m.boundary_edges.size());
  for (std::size_t i = 0; i < m.boundary_edges.size(); ++i) {
    EXPECT_EQ(r.boundary_edges[i].a, m.boundary_edges[i].a);
    EXPECT_EQ(r.boundary_edges[i].tag, m.boundary_edges[i].tag);
  }
  EXPECT_FALSE(r.validate().has_value());
}

TEST(MeshIo, MalformedInputRejected) {
  std::istringstream bad_header("vertices 3\n");
  EXPECT_THROW(read_mesh(bad_header), Error);
  std::istringstream truncated("nodes 3 triangles 1 edges 0\n0 0\n1 0\n");
  EXPECT_THROW(read_mesh(truncated), Error);
}
