#include "annulus/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "annulus/errors.hpp"

namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;

double tri_area(Vec2 a, Vec2 b, Vec2 c) { return 0.5 * cross(b - a, c - a); }

// Points at (approximately) equal arc length along a curve, counterclockwise
// from `start`. Polygon corners are moved onto their nearest point so that the
// polygon is represented exactly.
std::vector<Vec2> curve_points(const BoundaryCurve& curve, Vec2 start, int n) {
  std::vector<Vec2> pts(static_cast<std::size_t>(n));
  if (const auto* c = curve.circle()) {
    const double a0 = std::atan2(start.y - c->center.y, start.x - c->center.x);
    for (int j = 0; j < n; ++j) pts[static_cast<std::size_t>(j)] = c->center + c->radius * unit_direction(a0 + 2.0 * kPi * j / n);
    return pts;
  }
  if (const auto* e = curve.ellipse()) {
    // Cumulative arc length of t -> (a cos t, b sin t) on a fine table; any t lies
    // on the curve, so the table only needs to be accurate enough for spacing.
    constexpr int kTable = 8192;
    const double t0 = std::atan2((start.y - e->center.y) / e->b, (start.x - e->center.x) / e->a);
    std::vector<double> cum(kTable + 1, 0.0);
    for (int k = 0; k < kTable; ++k) {
      const double t = t0 + 2.0 * kPi * (k + 0.5) / kTable;
      cum[static_cast<std::size_t>(k) + 1] =
          cum[static_cast<std::size_t>(k)] + std::hypot(e->a * std::sin(t), e->b * std::cos(t)) * 2.0 * kPi / kTable;
    }
    const double total = cum.back();
    std::size_t k = 0;
    for (int j = 0; j < n; ++j) {
      const double target = total * j / n;
      while (k + 1 < cum.size() - 1 && cum[k + 1] < target) ++k;
      const double frac = (target - cum[k]) / (cum[k + 1] - cum[k]);
      const double t = t0 + 2.0 * kPi * (static_cast<double>(k) + frac) / kTable;
      pts[static_cast<std::size_t>(j)] = e->center + Vec2{e->a * std::cos(t), e->b * std::sin(t)};
    }
    return pts;
  }
  const ConvexPolygon& poly = *curve.polygon();
  const std::size_t m = poly.size();
  // Locate the edge containing `start`.
  std::size_t first = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    const Vec2 a = poly.vertex(i);
    const Vec2 d = poly.vertex(i + 1) - a;
    const double u = std::clamp(dot(start - a, d) / dot(d, d), 0.0, 1.0);
    const double dist = norm(a + u * d - start);
    if (dist < best) {
      best = dist;
      first = i;
    }
  }
  // Walk: start, then vertices first+1, first+2, ..., back to start.
  std::vector<Vec2> path{start};
  for (std::size_t i = 1; i <= m; ++i) path.push_back(poly.vertex(first + i));
  path.push_back(start);
  std::vector<double> cum{0.0};
  for (std::size_t i = 1; i < path.size(); ++i) cum.push_back(cum.back() + norm(path[i] - path[i - 1]));
  const double total = cum.back();
  std::vector<double> s(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(j)] = total * j / n;
  std::vector<bool> snapped(s.size(), false);
  snapped[0] = true;
  for (std::size_t i = 1; i <= m; ++i) {
    if (cum[i] >= total || norm(path[i] - start) < 1e-14 * total) continue;
    auto j = static_cast<std::size_t>(std::lround(cum[i] / total * n));
    if (j >= s.size() || snapped[j]) throw MesherError("too few boundary nodes to resolve every polygon corner");
    s[j] = cum[i];
    snapped[j] = true;
  }
  for (std::size_t j = 1; j < s.size(); ++j) {
    if (!(s[j] > s[j - 1])) throw MesherError("too few boundary nodes to resolve every polygon corner");
  }
  std::size_t seg = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    while (seg + 2 < cum.size() && cum[seg + 1] <= s[j]) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double frac = len > 0.0 ? (s[j] - cum[seg]) / len : 0.0;
    pts[j] = path[seg] + std::clamp(frac, 0.0, 1.0) * (path[seg + 1] - path[seg]);
  }
  return pts;
}

}  // namespace

Mesh mesh_annular(const AnnularDomain& domain, int n_radial, int n_angular) {
  if (n_radial < 2) throw MesherError("need n_radial >= 2");
  if (n_angular < 8) throw MesherError("need n_angular >= 8");
  Mesh m;
  m.n_radial = n_radial;
  m.n_angular = n_angular;
  const Vec2 c = domain.center();
  std::vector<Vec2> inner;
  std::vector<Vec2> outer;
  try {
    inner = curve_points(domain.inner(), c + domain.inner().ray_radius(c, 0.0) * Vec2{1.0, 0.0}, n_angular);
    outer = curve_points(domain.outer(), c + domain.outer().ray_radius(c, 0.0) * Vec2{1.0, 0.0}, n_angular);
  } catch (const DomainError& e) {
    throw MesherError(std::string("domain is not star-shaped about its center: ") + e.what());
  }
  m.nodes.resize(static_cast<std::size_t>(n_radial + 1) * static_cast<std::size_t>(n_angular));
  for (int j = 0; j < n_angular; ++j) {
    const Vec2 a = inner[static_cast<std::size_t>(j)];
    const Vec2 b = outer[static_cast<std::size_t>(j)];
    for (int i = 0; i <= n_radial; ++i) {
      const double rho = static_cast<double>(i) / n_radial;
      m.nodes[static_cast<std::size_t>(m.node(i, j))] = i == n_radial ? b : i == 0 ? a : (1.0 - rho) * a + rho * b;
    }
  }
  m.triangles.reserve(2 * static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_angular));
  for (int i = 0; i < n_radial; ++i) {
    for (int j = 0; j < n_angular; ++j) {
      const int a = m.node(i, j);
      const int b = m.node(i + 1, j);
      const int cc = m.node(i + 1, j + 1);
      const int d = m.node(i, j + 1);
      const double ac = norm(m.nodes[static_cast<std::size_t>(cc)] - m.nodes[static_cast<std::size_t>(a)]);
      const double bd = norm(m.nodes[static_cast<std::size_t>(d)] - m.nodes[static_cast<std::size_t>(b)]);
      if (bd < ac * (1.0 - 1e-12)) {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, cc, d});
      } else {
        m.triangles.push_back({a, b, cc});
        m.triangles.push_back({a, cc, d});
      }
    }
  }
  for (int j = 0; j < n_angular; ++j) {
    m.boundary_edges.push_back({m.node(n_radial, j), m.node(n_radial, j + 1), Side::outer});
  }
  for (int j = 0; j < n_angular; ++j) {
    m.boundary_edges.push_back({m.node(0, j + 1), m.node(0, j), Side::inner});
  }
  for (const auto& t : m.triangles) {
    const double a = tri_area(m.nodes[static_cast<std::size_t>(t[0])], m.nodes[static_cast<std::size_t>(t[1])],
                              m.nodes[static_cast<std::size_t>(t[2])]);
    if (!(a > 0.0)) throw MesherError("mapped grid produced an inverted triangle");
  }
  return m;
}

double Mesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) {
    a += tri_area(nodes[static_cast<std::size_t>(t[0])], nodes[static_cast<std::size_t>(t[1])],
                  nodes[static_cast<std::size_t>(t[2])]);
  }
  return a;
}

double Mesh::boundary_length(Side side) const {
  double len = 0.0;
  for (const auto& e : boundary_edges) {
    if (e.tag == side) len += norm(nodes[static_cast<std::size_t>(e.b)] - nodes[static_cast<std::size_t>(e.a)]);
  }
  return len;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& t : triangles) {
    for (int k = 0; k < 3; ++k) {
      h = std::max(h, norm(nodes[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])] -
                           nodes[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])]));
    }
  }
  return h;
}

std::vector<std::optional<Side>> Mesh::node_sides() const {
  std::vector<std::optional<Side>> s(nodes.size());
  for (const auto& e : boundary_edges) {
    s[static_cast<std::size_t>(e.a)] = e.tag;
    s[static_cast<std::size_t>(e.b)] = e.tag;
  }
  return s;
}

std::optional<std::string> Mesh::validate(const AnnularDomain* domain) const {
  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  if (!nodes.empty()) {
    xmin = xmax = nodes[0].x;
    ymin = ymax = nodes[0].y;
  }
  for (const Vec2& p : nodes) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double scale = 0.5 * std::hypot(xmax - xmin, ymax - ymin);
  const auto n = static_cast<int>(nodes.size());

  std::map<std::pair<int, int>, int> edge_use;
  for (const auto& t : triangles) {
    for (int v : t) {
      if (v < 0 || v >= n) return "triangle references a missing node";
    }
    const double a = tri_area(nodes[static_cast<std::size_t>(t[0])], nodes[static_cast<std::size_t>(t[1])],
                              nodes[static_cast<std::size_t>(t[2])]);
    if (!(a > 1e-14 * scale * scale)) return "triangle is inverted or degenerate";
    for (int k = 0; k < 3; ++k) {
      const int u = t[static_cast<std::size_t>(k)];
      const int v = t[static_cast<std::size_t>((k + 1) % 3)];
      ++edge_use[{std::min(u, v), std::max(u, v)}];
    }
  }
  std::map<std::pair<int, int>, int> boundary;
  for (const auto& e : boundary_edges) {
    if (e.a < 0 || e.a >= n || e.b < 0 || e.b >= n) return "boundary edge references a missing node";
    ++boundary[{std::min(e.a, e.b), std::max(e.a, e.b)}];
  }
  for (const auto& [edge, count] : edge_use) {
    const bool on_boundary = boundary.count(edge) != 0;
    if (count > 2) return "edge shared by more than two triangles";
    if (count == 1 && !on_boundary) return "free edge missing from the boundary list";
    if (count == 2 && on_boundary) return "interior edge tagged as boundary";
  }
  for (const auto& [edge, count] : boundary) {
    if (count != 1 || edge_use.count(edge) == 0) return "boundary edge is not a triangle edge";
  }

  // Two closed loops, one per tag.
  for (Side side : {Side::outer, Side::inner}) {
    std::map<int, int> next;
    for (const auto& e : boundary_edges) {
      if (e.tag != side) continue;
      if (next.count(e.a)) return "boundary loop branches";
      next[e.a] = e.b;
    }
    if (next.empty()) return "missing boundary component";
    int start = next.begin()->first;
    int cur = start;
    std::size_t steps = 0;
    do {
      auto it = next.find(cur);
      if (it == next.end()) return "boundary loop is open";
      cur = it->second;
      ++steps;
    } while (cur != start && steps <= next.size());
    if (steps != next.size()) return "boundary component is not a single closed loop";
  }

  if (domain) {
    const double tol = 1e-9 * domain->scale();
    for (const auto& e : boundary_edges) {
      const BoundaryCurve& c = e.tag == Side::outer ? domain->outer() : domain->inner();
      for (int v : {e.a, e.b}) {
        if (c.distance(nodes[static_cast<std::size_t>(v)]) > tol) return "boundary node is off its curve";
      }
    }
  }
  return std::nullopt;
}

}  // namespace annulus
