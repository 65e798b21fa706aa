#include "annulus/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/quadrature.hpp"

namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;

double segment_distance(Vec2 p, Vec2 a, Vec2 b, Vec2* closest = nullptr) {
  const Vec2 d = b - a;
  const double len2 = dot(d, d);
  double t = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 q = a + t * d;
  if (closest) *closest = q;
  return norm(p - q);
}

// Maximizes a concave function on [lo, hi] by golden-section search.
template <class F>
double golden_max(F&& f, double lo, double hi, int iterations, double* arg = nullptr) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < iterations && hi - lo > 0.0; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(x1);
    }
  }
  const double best = f1 > f2 ? x1 : x2;
  if (arg) *arg = best;
  return std::max(f1, f2);
}

}  // namespace

// ---------------------------------------------------------------------------
// ConvexPolygon

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  const std::size_t n = vertices_.size();
  if (n < 3) throw InvalidGeometry("polygon needs at least 3 vertices");
  for (const Vec2& v : vertices_) {
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw InvalidGeometry("polygon vertex is not finite");
  }
  const double s = scale();
  if (!(s > 0.0)) throw InvalidGeometry("polygon has zero extent");
  const double s2 = s * s;
  for (std::size_t i = 0; i < n; ++i) {
    if (norm(vertex(i + 1) - vertex(i)) <= 1e-14 * s) {
      throw InvalidGeometry("polygon has a zero-length edge");
    }
  }
  if (!(area() > 1e-14 * s2)) throw InvalidGeometry("polygon is clockwise or degenerate");
  double turning = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e0 = vertex(i + 1) - vertex(i);
    const Vec2 e1 = vertex(i + 2) - vertex(i + 1);
    const double c = cross(e0, e1);
    if (c < -1e-12 * s2) throw InvalidGeometry("polygon is not convex");
    turning += std::atan2(c, dot(e0, e1));
  }
  if (std::abs(turning - 2.0 * kPi) > 1e-9) throw InvalidGeometry("polygon is not simple");
}

ConvexPolygon ConvexPolygon::regular(int sides, double circumradius, Vec2 center, double phase) {
  if (sides < 3 || !(circumradius > 0.0)) throw InvalidGeometry("bad regular polygon");
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int k = 0; k < sides; ++k) {
    v.push_back(center + circumradius * unit_direction(phase + 2.0 * kPi * k / sides));
  }
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::rectangle(double width, double height, Vec2 center) {
  const double hx = 0.5 * width;
  const double hy = 0.5 * height;
  return ConvexPolygon({center + Vec2{-hx, -hy}, center + Vec2{hx, -hy}, center + Vec2{hx, hy},
                        center + Vec2{-hx, hy}});
}

double ConvexPolygon::area() const noexcept {
  // Shoelace relative to the first vertex to limit cancellation.
  const Vec2 o = vertices_.front();
  double a = 0.0;
  for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) {
    a += cross(vertices_[i] - o, vertices_[i + 1] - o);
  }
  return 0.5 * a;
}

double ConvexPolygon::perimeter() const noexcept {
  double p = 0.0;
  for (std::size_t i = 0; i < size(); ++i) p += norm(vertex(i + 1) - vertex(i));
  return p;
}

Vec2 ConvexPolygon::centroid() const noexcept {
  const Vec2 o = vertices_.front();
  double a = 0.0;
  Vec2 c{};
  for (std::size_t i = 1; i + 1 < vertices_.size(); ++i) {
    const Vec2 p = vertices_[i] - o;
    const Vec2 q = vertices_[i + 1] - o;
    const double w = cross(p, q);
    a += w;
    c += (w / 3.0) * (p + q);
  }
  return o + (1.0 / a) * c;
}

double ConvexPolygon::scale() const noexcept {
  double xmin = vertices_[0].x, xmax = xmin, ymin = vertices_[0].y, ymax = ymin;
  for (const Vec2& v : vertices_) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  return 0.5 * std::hypot(xmax - xmin, ymax - ymin);
}

double ConvexPolygon::depth(Vec2 p) const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) {
    const Vec2 a = vertex(i);
    const Vec2 e = vertex(i + 1) - a;
    d = std::min(d, cross(e, p - a) / norm(e));
  }
  return d;
}

bool ConvexPolygon::contains(Vec2 p, double tol) const noexcept { return depth(p) >= -tol; }

double ConvexPolygon::boundary_distance(Vec2 p) const noexcept {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < size(); ++i) d = std::min(d, segment_distance(p, vertex(i), vertex(i + 1)));
  return d;
}

Vec2 ConvexPolygon::closest_boundary_point(Vec2 p) const noexcept {
  double best = std::numeric_limits<double>::infinity();
  Vec2 q{};
  for (std::size_t i = 0; i < size(); ++i) {
    Vec2 c;
    const double d = segment_distance(p, vertex(i), vertex(i + 1), &c);
    if (d < best) {
      best = d;
      q = c;
    }
  }
  return q;
}

ConvexPolygon ConvexPolygon::translated(Vec2 shift) const {
  std::vector<Vec2> v(vertices_.begin(), vertices_.end());
  for (Vec2& p : v) p += shift;
  return ConvexPolygon(std::move(v));
}

ConvexPolygon ConvexPolygon::scaled(double factor, Vec2 about) const {
  if (!(factor > 0.0)) throw InvalidGeometry("scale factor must be positive");
  std::vector<Vec2> v(vertices_.begin(), vertices_.end());
  for (Vec2& p : v) p = about + factor * (p - about);
  return ConvexPolygon(std::move(v));
}

// ---------------------------------------------------------------------------

void ShellSpec::validate() const {
  if (dim < 2) throw InvalidGeometry("shell dimension must be >= 2");
  if (!(r_inner > 0.0) || !(r_outer > r_inner) || !std::isfinite(r_outer)) {
    throw InvalidGeometry("shell radii must satisfy 0 < R1 < R2");
  }
}

double polygon_area(const ConvexPolygon& p) { return p.area(); }

Quermass2d quermassintegrals_2d(const ConvexPolygon& p) {
  return {p.area(), 0.5 * p.perimeter(), kPi};
}

double unit_ball_volume(int n) {
  if (n < 1) throw RangeError("dimension must be positive");
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double shell_quermass(int n, double radius, int index) {
  if (index < 0 || index > n) throw RangeError("quermassintegral index out of range");
  return unit_ball_volume(n) * std::pow(radius, n - index);
}

double ball_perimeter(int n, double radius) {
  return n * unit_ball_volume(n) * std::pow(radius, n - 1);
}

double shell_volume(const ShellSpec& shell) {
  const int n = shell.dim;
  return unit_ball_volume(n) * (std::pow(shell.r_outer, n) - std::pow(shell.r_inner, n));
}

Vec2 chebyshev_center(const ConvexPolygon& p) {
  double xmin = p.vertex(0).x, xmax = xmin, ymin = p.vertex(0).y, ymax = ymin;
  for (const Vec2& v : p.vertices()) {
    xmin = std::min(xmin, v.x);
    xmax = std::max(xmax, v.x);
    ymin = std::min(ymin, v.y);
    ymax = std::max(ymax, v.y);
  }
  constexpr int kIterations = 90;
  // Depth is concave, so is its partial maximum over y.
  auto best_over_y = [&](double x, double* y_arg) {
    return golden_max([&](double y) { return p.depth({x, y}); }, ymin, ymax, kIterations, y_arg);
  };
  double x_best = 0.0;
  golden_max([&](double x) { return best_over_y(x, nullptr); }, xmin, xmax, kIterations, &x_best);
  double y_best = 0.0;
  best_over_y(x_best, &y_best);
  Vec2 center{x_best, y_best};
  double radius = p.depth(center);

  // Polish: the optimum is equidistant from (at least) three supporting lines,
  // or two parallel ones. Try the nearly active edges exactly.
  const std::size_t n = p.size();
  std::vector<std::pair<double, std::size_t>> slack;
  slack.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = p.vertex(i);
    const Vec2 e = p.vertex(i + 1) - a;
    slack.emplace_back(cross(e, center - a) / norm(e) - radius, i);
  }
  const std::size_t k = std::min<std::size_t>(n, 6);
  std::partial_sort(slack.begin(), slack.begin() + static_cast<std::ptrdiff_t>(k), slack.end());
  auto line = [&](std::size_t i) {
    const Vec2 a = p.vertex(i);
    const Vec2 e = p.vertex(i + 1) - a;
    const Vec2 nrm = (1.0 / norm(e)) * Vec2{-e.y, e.x};  // inward
    return std::pair{nrm, dot(nrm, a)};
  };
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t l = j + 1; l < k; ++l) {
        // n.x - r = n.a  for the three lines.
        const auto [n0, c0] = line(slack[i].second);
        const auto [n1, c1] = line(slack[j].second);
        const auto [n2, c2] = line(slack[l].second);
        const std::array<std::array<double, 4>, 3> m{{{n0.x, n0.y, -1.0, c0},
                                                      {n1.x, n1.y, -1.0, c1},
                                                      {n2.x, n2.y, -1.0, c2}}};
        auto det3 = [](double a, double b, double c, double d, double e, double f, double g,
                       double h, double ii) {
          return a * (e * ii - f * h) - b * (d * ii - f * g) + c * (d * h - e * g);
        };
        const double det = det3(m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0],
                                m[2][1], m[2][2]);
        if (std::abs(det) < 1e-12) continue;
        const double dx = det3(m[0][3], m[0][1], m[0][2], m[1][3], m[1][1], m[1][2], m[2][3],
                               m[2][1], m[2][2]);
        const double dy = det3(m[0][0], m[0][3], m[0][2], m[1][0], m[1][3], m[1][2], m[2][0],
                               m[2][3], m[2][2]);
        const Vec2 candidate{dx / det, dy / det};
        const double r = p.depth(candidate);
        if (r > radius) {
          radius = r;
          center = candidate;
        }
      }
    }
  }
  return center;
}

double inradius(const ConvexPolygon& p) { return p.depth(chebyshev_center(p)); }

namespace detail {
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 normal, double offset);
std::vector<Vec2> dedupe(std::vector<Vec2> v, double tol);
}  // namespace detail

ConvexPolygon inner_parallel(const ConvexPolygon& p, double delta) {
  if (delta < 0.0 || !std::isfinite(delta)) throw RangeError("erosion distance must be >= 0");
  if (delta == 0.0) return p;
  std::vector<Vec2> poly(p.vertices().begin(), p.vertices().end());
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n && !poly.empty(); ++i) {
    const Vec2 a = p.vertex(i);
    const Vec2 e = p.vertex(i + 1) - a;
    const Vec2 inward = (1.0 / norm(e)) * Vec2{-e.y, e.x};
    poly = detail::clip_halfplane(poly, inward, dot(inward, a) + delta);
  }
  const double s = p.scale();
  poly = detail::dedupe(std::move(poly), 1e-13 * s);
  if (poly.size() < 3) throw EmptyBody("inner parallel body is empty (delta >= inradius)");
  try {
    ConvexPolygon out(std::move(poly));
    if (!(out.area() > 1e-14 * s * s)) throw EmptyBody("inner parallel body is empty");
    return out;
  } catch (const InvalidGeometry&) {
    throw EmptyBody("inner parallel body is degenerate (delta ~ inradius)");
  }
}

ParallelMeasures outer_parallel_measures(const ConvexPolygon& p, double delta) {
  if (delta < 0.0) throw RangeError("parallel distance must be >= 0");
  const double a = p.area();
  const double per = p.perimeter();
  return {a + per * delta + kPi * delta * delta, per + 2.0 * kPi * delta};
}

double distance_to_boundary(Vec2 x, const AnnularDomain& domain, Side side) {
  if (!domain.contains(x, 1e-12 * domain.scale())) {
    throw DomainError("point lies outside the closed domain");
  }
  return domain.distance(x, side);
}

double aleksandrov_fenchel_margin(const ConvexPolygon& p) {
  const Quermass2d w = quermassintegrals_2d(p);
  const double omega2 = kPi;
  return w.w1 / omega2 - std::sqrt(w.w0 / omega2);
}

double ClassSData::relative_residual() const noexcept {
  const double shell_area = kPi * (r_outer * r_outer - r_inner * r_inner);
  return std::abs(residual) / shell_area;
}

ClassSData class_s_data(const AnnularDomain& domain) {
  ClassSData d;
  d.r_outer = domain.outer().perimeter() / (2.0 * kPi);
  d.r_inner = domain.inner().perimeter() / (2.0 * kPi);
  if (d.r_inner >= d.r_outer) {
    throw Infeasible("hole perimeter radius is not below the outer perimeter radius");
  }
  d.residual = domain.area() - kPi * (d.r_outer * d.r_outer - d.r_inner * d.r_inner);
  return d;
}

double isoperimetric_deficit(const BoundaryCurve& c) {
  const double per = c.perimeter();
  return per * per - 4.0 * kPi * c.area();
}

HoleScaling scale_hole_to_class_s(const BoundaryCurve& outer, const BoundaryCurve& hole_shape) {
  const double d_out = isoperimetric_deficit(outer);
  const double d_hole = isoperimetric_deficit(hole_shape);
  const double p_out = outer.perimeter();
  const double p_hole = hole_shape.perimeter();
  const bool outer_round = d_out <= 1e-12 * p_out * p_out;
  const bool hole_round = d_hole <= 1e-12 * p_hole * p_hole;

  const Vec2 target = outer.centroid();
  const Vec2 origin = hole_shape.centroid();
  auto place = [&](double s) { return hole_shape.scaled(s, origin).translated(target - origin); };
  const double tol = 1e-9 * outer.scale();
  auto fits = [&](double s) { return sampled_gap(outer, place(s)) > tol; };

  // Nested homothetic copies: containment is monotone in s.
  double lo = 0.0;
  double hi = 2.0 * outer.scale() / hole_shape.scale();
  while (fits(hi)) hi *= 2.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (fits(mid) ? lo : hi) = mid;
  }

  HoleScaling out;
  out.max_feasible_scale = lo;
  if (outer_round && hole_round) {
    if (!(lo > 0.0)) throw ContainmentError("no scale of the hole fits inside the outer body");
    out.hole = place(0.5 * lo);
    out.gap = sampled_gap(outer, *out.hole);
    return out;
  }
  if (hole_round || outer_round) {
    throw Infeasible("one isoperimetric deficit vanishes while the other does not");
  }
  const double s = std::sqrt(d_out / d_hole);
  out.scale = s;
  BoundaryCurve hole = place(s);
  out.gap = sampled_gap(outer, hole);
  if (out.gap <= tol) throw ContainmentError("scaled hole is not compactly contained");
  out.hole = std::move(hole);
  return out;
}

// ---------------------------------------------------------------------------

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw RangeError("Gauss-Legendre order must be >= 1");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = order * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / dp;
      if (std::abs(z - z1) <= 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -z;
    rule.nodes[static_cast<std::size_t>(order - 1 - i)] = z;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

}  // namespace annulus
