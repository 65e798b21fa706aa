#include <algorithm>
#include <cmath>
#include <numbers>

#include "annulus/errors.hpp"
#include "annulus/geometry.hpp"

namespace annulus {

namespace detail {

// Keeps the part of `poly` with dot(normal, x) >= offset.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 normal, double offset) {
  std::vector<Vec2> out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const double da = dot(normal, a) - offset;
    const double db = dot(normal, b) - offset;
    if (da >= 0.0) out.push_back(a);
    if ((da >= 0.0) != (db >= 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

std::vector<Vec2> dedupe(std::vector<Vec2> v, double tol) {
  std::vector<Vec2> out;
  out.reserve(v.size());
  for (const Vec2& p : v) {
    if (out.empty() || norm(p - out.back()) > tol) out.push_back(p);
  }
  while (out.size() > 1 && norm(out.front() - out.back()) <= tol) out.pop_back();
  return out;
}

}  // namespace detail

std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip) {
  std::vector<Vec2> poly(subject.vertices().begin(), subject.vertices().end());
  for (std::size_t i = 0; i < clip.size() && !poly.empty(); ++i) {
    const Vec2 a = clip.vertex(i);
    const Vec2 e = clip.vertex(i + 1) - a;
    const Vec2 inward = (1.0 / norm(e)) * Vec2{-e.y, e.x};
    poly = detail::clip_halfplane(poly, inward, dot(inward, a));
  }
  const double s = std::max(subject.scale(), clip.scale());
  poly = detail::dedupe(std::move(poly), 1e-13 * s);
  if (poly.size() < 3) return std::nullopt;
  try {
    ConvexPolygon out(std::move(poly));
    return out;
  } catch (const InvalidGeometry&) {
    return std::nullopt;
  }
}

ConvexPolygon outer_parallel_polygon(const ConvexPolygon& p, double delta, double max_turn) {
  if (delta < 0.0) throw RangeError("parallel distance must be >= 0");
  if (delta == 0.0) return p;
  if (!(max_turn > 0.0)) throw RangeError("arc resolution must be positive");
  const std::size_t n = p.size();
  auto outward = [&](std::size_t i) {
    const Vec2 e = p.vertex(i + 1) - p.vertex(i);
    return (1.0 / norm(e)) * Vec2{e.y, -e.x};
  };
  std::vector<Vec2> v;
  v.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 corner = p.vertex(i);
    const Vec2 n_in = outward((i + n - 1) % n);
    const Vec2 n_out = outward(i);
    const double a0 = std::atan2(n_in.y, n_in.x);
    double turn = std::atan2(cross(n_in, n_out), dot(n_in, n_out));
    if (turn < 0.0) turn = 0.0;
    const int pieces = std::max(1, static_cast<int>(std::ceil(turn / max_turn)));
    if (turn == 0.0) {
      v.push_back(corner + delta * n_in);
      continue;
    }
    for (int k = 0; k <= pieces; ++k) {
      v.push_back(corner + delta * unit_direction(a0 + turn * k / pieces));
    }
  }
  v = detail::dedupe(std::move(v), 1e-13 * (p.scale() + delta));
  return ConvexPolygon(std::move(v));
}

namespace {

// Length of the part of segment [a, b] that lies inside the convex polygon.
double inside_length(Vec2 a, Vec2 b, const ConvexPolygon& poly) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec2 d = b - a;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 v = poly.vertex(i);
    const Vec2 e = poly.vertex(i + 1) - v;
    // inside: cross(e, x - v) >= 0
    const double f0 = cross(e, a - v);
    const double fd = cross(e, d);
    if (fd == 0.0) {
      if (f0 < 0.0) return 0.0;
      continue;
    }
    const double t = -f0 / fd;
    if (fd > 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 >= t1) return 0.0;
  }
  return (t1 - t0) * norm(d);
}

double boundary_outside(const ConvexPolygon& a, const ConvexPolygon& b) {
  double len = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Vec2 p = a.vertex(i);
    const Vec2 q = a.vertex(i + 1);
    len += norm(q - p) - inside_length(p, q, b);
  }
  return len;
}

}  // namespace

double union_perimeter(const ConvexPolygon& a, const ConvexPolygon& b) {
  return boundary_outside(a, b) + boundary_outside(b, a);
}

double union_area(const ConvexPolygon& a, const ConvexPolygon& b) {
  const auto both = clip_convex(a, b);
  return a.area() + b.area() - (both ? both->area() : 0.0);
}

}  // namespace annulus
