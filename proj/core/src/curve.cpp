#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/geometry.hpp"
#include "annulus/quadrature.hpp"

namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

// Root of F(s) = (n0/(s+r0))^2 + (z1/(s+1))^2 - 1 on (z1 - 1, s1]: safeguarded Newton.
double ellipse_foot_parameter(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double lo = z1 - 1.0;
  double hi = g < 0.0 ? 0.0 : std::hypot(n0, z1) - 1.0;
  auto f = [&](double s) {
    const double u = n0 / (s + r0);
    const double v = z1 / (s + 1.0);
    return u * u + v * v - 1.0;
  };
  auto df = [&](double s) {
    const double u = n0 / (s + r0);
    const double v = z1 / (s + 1.0);
    return -2.0 * (u * u / (s + r0) + v * v / (s + 1.0));
  };
  double s = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double fs = f(s);
    if (fs == 0.0) return s;
    // F is decreasing.
    (fs > 0.0 ? lo : hi) = s;
    const double d = df(s);
    double next = d != 0.0 ? s - fs / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(s))) {
      return next;
    }
    s = next;
  }
  return s;
}

double parse_number(const std::string& token) {
  const char* begin = token.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw InvalidGeometry("curve spec: '" + token + "' is not a finite decimal");
  }
  return v;
}

}  // namespace

EllipseProjection project_onto_ellipse(const Ellipse& e, Vec2 p) {
  Vec2 q = p - e.center;
  double a = e.a;
  double b = e.b;
  const bool swapped = b > a;
  if (swapped) {
    std::swap(a, b);
    std::swap(q.x, q.y);
  }
  const double sx = q.x < 0.0 ? -1.0 : 1.0;
  const double sy = q.y < 0.0 ? -1.0 : 1.0;
  const double y0 = std::abs(q.x);
  const double y1 = std::abs(q.y);
  double x0 = 0.0;
  double x1 = 0.0;
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / a;
      const double z1 = y1 / b;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g != 0.0) {
        const double r0 = (a / b) * (a / b);
        const double s = ellipse_foot_parameter(r0, z0, z1, g);
        x0 = r0 * y0 / (s + r0);
        x1 = y1 / (s + 1.0);
      } else {
        x0 = y0;
        x1 = y1;
      }
    } else {
      x0 = 0.0;
      x1 = b;
    }
  } else {
    const double numer = a * y0;
    const double denom = a * a - b * b;
    if (numer < denom) {
      const double xa = numer / denom;
      x0 = a * xa;
      x1 = b * std::sqrt(std::max(0.0, 1.0 - xa * xa));
    } else {
      x0 = a;
      x1 = 0.0;
    }
  }
  const double dist = std::hypot(x0 - y0, x1 - y1);
  Vec2 foot{sx * x0, sy * x1};
  if (swapped) std::swap(foot.x, foot.y);
  return {e.center + foot, dist};
}

double ellipse_perimeter(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw InvalidGeometry("ellipse semi-axes must be positive");
  auto speed = [a, b](double t) {
    const double s = std::sin(t);
    const double c = std::cos(t);
    return std::sqrt(a * a * s * s + b * b * c * c);
  };
  const double quarter = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      speed, 0.0, kPi / 2.0, 20, 1e-13);
  return 4.0 * quarter;
}

// ---------------------------------------------------------------------------
// BoundaryCurve

BoundaryCurve::BoundaryCurve(Circle c) : shape_(c) {
  if (!(c.radius > 0.0) || !std::isfinite(c.radius) || !std::isfinite(c.center.x) ||
      !std::isfinite(c.center.y)) {
    throw InvalidGeometry("circle radius must be positive and finite");
  }
}

BoundaryCurve::BoundaryCurve(Ellipse e) : shape_(e) {
  if (!(e.a > 0.0) || !(e.b > 0.0) || !std::isfinite(e.a) || !std::isfinite(e.b) ||
      !std::isfinite(e.center.x) || !std::isfinite(e.center.y)) {
    throw InvalidGeometry("ellipse semi-axes must be positive and finite");
  }
}

BoundaryCurve::BoundaryCurve(ConvexPolygon p) : shape_(std::move(p)) {}

BoundaryCurve::Kind BoundaryCurve::kind() const noexcept {
  return static_cast<Kind>(shape_.index());
}

double BoundaryCurve::area() const {
  return std::visit(Overloaded{[](const Circle& c) { return kPi * c.radius * c.radius; },
                               [](const Ellipse& e) { return kPi * e.a * e.b; },
                               [](const ConvexPolygon& p) { return p.area(); }},
                    shape_);
}

double BoundaryCurve::perimeter() const {
  return std::visit(Overloaded{[](const Circle& c) { return 2.0 * kPi * c.radius; },
                               [](const Ellipse& e) { return ellipse_perimeter(e.a, e.b); },
                               [](const ConvexPolygon& p) { return p.perimeter(); }},
                    shape_);
}

Vec2 BoundaryCurve::centroid() const noexcept {
  return std::visit(Overloaded{[](const Circle& c) { return c.center; },
                               [](const Ellipse& e) { return e.center; },
                               [](const ConvexPolygon& p) { return p.centroid(); }},
                    shape_);
}

double BoundaryCurve::scale() const noexcept {
  return std::visit(Overloaded{[](const Circle& c) { return c.radius; },
                               [](const Ellipse& e) { return std::max(e.a, e.b); },
                               [](const ConvexPolygon& p) { return p.scale(); }},
                    shape_);
}

bool BoundaryCurve::contains(Vec2 p, double tol) const noexcept {
  return std::visit(
      Overloaded{[&](const Circle& c) { return norm(p - c.center) <= c.radius + tol; },
                 [&](const Ellipse& e) {
                   const Vec2 q = p - e.center;
                   const double level = (q.x / e.a) * (q.x / e.a) + (q.y / e.b) * (q.y / e.b);
                   const bool inside = level <= 1.0;
                   if (tol == 0.0) return inside;
                   const double d = project_onto_ellipse(e, p).distance;
                   const double signed_dist = inside ? -d : d;
                   return signed_dist <= tol;
                 },
                 [&](const ConvexPolygon& poly) { return poly.contains(p, tol); }},
      shape_);
}

double BoundaryCurve::distance(Vec2 p) const {
  return std::visit(
      Overloaded{[&](const Circle& c) { return std::abs(norm(p - c.center) - c.radius); },
                 [&](const Ellipse& e) { return project_onto_ellipse(e, p).distance; },
                 [&](const ConvexPolygon& poly) { return poly.boundary_distance(p); }},
      shape_);
}

Vec2 BoundaryCurve::foot_point(Vec2 p) const {
  return std::visit(Overloaded{[&](const Circle& c) {
                                 const Vec2 d = p - c.center;
                                 const double r = norm(d);
                                 if (r == 0.0) return c.center + Vec2{c.radius, 0.0};
                                 return c.center + (c.radius / r) * d;
                               },
                               [&](const Ellipse& e) { return project_onto_ellipse(e, p).point; },
                               [&](const ConvexPolygon& poly) {
                                 return poly.closest_boundary_point(p);
                               }},
                    shape_);
}

Vec2 BoundaryCurve::outward_normal(Vec2 q) const {
  return std::visit(Overloaded{[&](const Circle& c) {
                                 const Vec2 d = q - c.center;
                                 return (1.0 / norm(d)) * d;
                               },
                               [&](const Ellipse& e) {
                                 const Vec2 d = q - e.center;
                                 const Vec2 g{d.x / (e.a * e.a), d.y / (e.b * e.b)};
                                 return (1.0 / norm(g)) * g;
                               },
                               [&](const ConvexPolygon& poly) {
                                 double best = std::numeric_limits<double>::infinity();
                                 Vec2 nrm{};
                                 for (std::size_t i = 0; i < poly.size(); ++i) {
                                   const Vec2 a = poly.vertex(i);
                                   const Vec2 b = poly.vertex(i + 1);
                                   const Vec2 e = b - a;
                                   const double t =
                                       std::clamp(dot(q - a, e) / dot(e, e), 0.0, 1.0);
                                   const double d = norm(q - (a + t * e));
                                   if (d < best) {
                                     best = d;
                                     nrm = (1.0 / norm(e)) * Vec2{e.y, -e.x};
                                   }
                                 }
                                 return nrm;
                               }},
                    shape_);
}

double BoundaryCurve::curvature(Vec2 q) const {
  return std::visit(
      Overloaded{[&](const Circle& c) { return 1.0 / c.radius; },
                 [&](const Ellipse& e) {
                   const Vec2 d = q - e.center;
                   const double a2 = e.a * e.a;
                   const double b2 = e.b * e.b;
                   const double s = d.x * d.x / (a2 * a2) + d.y * d.y / (b2 * b2);
                   return 1.0 / (a2 * b2 * std::pow(s, 1.5));
                 },
                 [&](const ConvexPolygon&) -> double {
                   throw CurvatureUnavailable("curvature is not available on polygonal curves");
                 }},
      shape_);
}

double BoundaryCurve::ray_radius(Vec2 origin, double angle) const {
  const Vec2 dir = unit_direction(angle);
  return std::visit(
      Overloaded{[&](const Circle& c) {
                   const Vec2 d = origin - c.center;
                   const double b = dot(d, dir);
                   const double cc = dot(d, d) - c.radius * c.radius;
                   if (cc >= 0.0) throw DomainError("ray origin is not inside the circle");
                   return -b + std::sqrt(b * b - cc);
                 },
                 [&](const Ellipse& e) {
                   const Vec2 d = origin - e.center;
                   const double ia2 = 1.0 / (e.a * e.a);
                   const double ib2 = 1.0 / (e.b * e.b);
                   const double qa = dir.x * dir.x * ia2 + dir.y * dir.y * ib2;
                   const double qb = d.x * dir.x * ia2 + d.y * dir.y * ib2;
                   const double qc = d.x * d.x * ia2 + d.y * d.y * ib2 - 1.0;
                   if (qc >= 0.0) throw DomainError("ray origin is not inside the ellipse");
                   // Stable root of qa r^2 + 2 qb r + qc = 0 with r > 0.
                   const double disc = std::sqrt(qb * qb - qa * qc);
                   return qb >= 0.0 ? -qc / (qb + disc) : (disc - qb) / qa;
                 },
                 [&](const ConvexPolygon& poly) {
                   double best = std::numeric_limits<double>::infinity();
                   for (std::size_t i = 0; i < poly.size(); ++i) {
                     const Vec2 a = poly.vertex(i);
                     const Vec2 e = poly.vertex(i + 1) - a;
                     const Vec2 inward = (1.0 / norm(e)) * Vec2{-e.y, e.x};
                     const double depth = dot(inward, origin - a);
                     if (depth <= 0.0) throw DomainError("ray origin is not inside the polygon");
                     const double rate = -dot(inward, dir);
                     if (rate > 0.0) best = std::min(best, depth / rate);
                   }
                   return best;
                 }},
      shape_);
}

std::vector<double> BoundaryCurve::corner_angles(Vec2 origin) const {
  std::vector<double> out;
  if (const auto* poly = polygon()) {
    for (const Vec2& v : poly->vertices()) {
      out.push_back(wrap_angle(std::atan2(v.y - origin.y, v.x - origin.x)));
    }
    std::sort(out.begin(), out.end());
  }
  return out;
}

ConvexPolygon BoundaryCurve::polygonize(int sides) const {
  if (const auto* poly = polygon()) return *poly;
  if (sides < 3) throw RangeError("polygonization needs at least 3 sides");
  Vec2 c;
  double a = 0.0;
  double b = 0.0;
  if (const auto* circ = circle()) {
    c = circ->center;
    a = b = circ->radius;
  } else {
    const auto* e = ellipse();
    c = e->center;
    a = e->a;
    b = e->b;
  }
  std::vector<Vec2> v;
  v.reserve(static_cast<std::size_t>(sides));
  for (int k = 0; k < sides; ++k) {
    const double t = 2.0 * kPi * k / sides;
    v.push_back(c + Vec2{a * std::cos(t), b * std::sin(t)});
  }
  return ConvexPolygon(std::move(v));
}

std::vector<Vec2> BoundaryCurve::sample(int count) const {
  if (const auto* poly = polygon()) {
    const double per = poly->perimeter();
    const int n = static_cast<int>(poly->size());
    const int extra = std::max(0, count - n);
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n + extra));
    for (int i = 0; i < n; ++i) {
      const Vec2 a = poly->vertex(static_cast<std::size_t>(i));
      const Vec2 b = poly->vertex(static_cast<std::size_t>(i) + 1);
      const int k = static_cast<int>(std::round(extra * norm(b - a) / per));
      for (int j = 0; j <= k; ++j) out.push_back(a + (static_cast<double>(j) / (k + 1)) * (b - a));
    }
    return out;
  }
  const ConvexPolygon p = polygonize(std::max(3, count));
  return {p.vertices().begin(), p.vertices().end()};
}

std::vector<BoundaryNode> BoundaryCurve::arclength_rule(int cells, int order) const {
  if (cells < 1) throw RangeError("boundary rule needs at least one cell");
  const GaussRule& g = gauss_legendre(order);
  std::vector<BoundaryNode> out;
  if (const auto* poly = polygon()) {
    const double per = poly->perimeter();
    for (std::size_t i = 0; i < poly->size(); ++i) {
      const Vec2 a = poly->vertex(i);
      const Vec2 b = poly->vertex(i + 1);
      const double len = norm(b - a);
      const Vec2 nrm = (1.0 / len) * Vec2{(b - a).y, -(b - a).x};
      const int k = std::max(1, static_cast<int>(std::ceil(cells * len / per)));
      for (int j = 0; j < k; ++j) {
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          const double t = (j + 0.5 * (g.nodes[q] + 1.0)) / k;
          out.push_back({a + t * (b - a), nrm, 0.5 * g.weights[q] * len / k});
        }
      }
    }
    return out;
  }
  Vec2 c;
  double a = 0.0;
  double b = 0.0;
  if (const auto* circ = circle()) {
    c = circ->center;
    a = b = circ->radius;
  } else {
    c = ellipse()->center;
    a = ellipse()->a;
    b = ellipse()->b;
  }
  const double dt = 2.0 * kPi / cells;
  out.reserve(static_cast<std::size_t>(cells) * g.nodes.size());
  for (int j = 0; j < cells; ++j) {
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double t = dt * (j + 0.5 * (g.nodes[q] + 1.0));
      const double ct = std::cos(t);
      const double st = std::sin(t);
      const double speed = std::hypot(a * st, b * ct);
      const Vec2 nrm = (1.0 / std::hypot(b * ct, a * st)) * Vec2{b * ct, a * st};
      out.push_back({c + Vec2{a * ct, b * st}, nrm, 0.5 * g.weights[q] * dt * speed});
    }
  }
  return out;
}

BoundaryCurve BoundaryCurve::translated(Vec2 shift) const {
  return std::visit(
      Overloaded{[&](const Circle& c) { return BoundaryCurve(Circle{c.center + shift, c.radius}); },
                 [&](const Ellipse& e) {
                   return BoundaryCurve(Ellipse{e.center + shift, e.a, e.b});
                 },
                 [&](const ConvexPolygon& p) { return BoundaryCurve(p.translated(shift)); }},
      shape_);
}

BoundaryCurve BoundaryCurve::scaled(double factor, Vec2 about) const {
  if (!(factor > 0.0)) throw InvalidGeometry("scale factor must be positive");
  return std::visit(Overloaded{[&](const Circle& c) {
                                 return BoundaryCurve(
                                     Circle{about + factor * (c.center - about), factor * c.radius});
                               },
                               [&](const Ellipse& e) {
                                 return BoundaryCurve(Ellipse{about + factor * (e.center - about),
                                                              factor * e.a, factor * e.b});
                               },
                               [&](const ConvexPolygon& p) {
                                 return BoundaryCurve(p.scaled(factor, about));
                               }},
                    shape_);
}

std::string BoundaryCurve::to_spec() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{[&](const Circle& c) {
                          os << "circle " << c.center.x << ' ' << c.center.y << ' ' << c.radius;
                        },
                        [&](const Ellipse& e) {
                          os << "ellipse " << e.center.x << ' ' << e.center.y << ' ' << e.a << ' '
                             << e.b;
                        },
                        [&](const ConvexPolygon& p) {
                          os << "polygon";
                          for (const Vec2& v : p.vertices()) os << ' ' << v.x << ' ' << v.y;
                        }},
             shape_);
  return os.str();
}

BoundaryCurve parse_curve(std::string_view text) {
  std::istringstream is{std::string(text)};
  std::string kind;
  if (!(is >> kind)) throw InvalidGeometry("curve spec: empty");
  std::vector<double> values;
  for (std::string tok; is >> tok;) values.push_back(parse_number(tok));
  if (kind == "circle") {
    if (values.size() != 3) throw InvalidGeometry("curve spec: circle expects 'circle cx cy r'");
    return BoundaryCurve(Circle{{values[0], values[1]}, values[2]});
  }
  if (kind == "ellipse") {
    if (values.size() != 4) {
      throw InvalidGeometry("curve spec: ellipse expects 'ellipse cx cy a b'");
    }
    return BoundaryCurve(Ellipse{{values[0], values[1]}, values[2], values[3]});
  }
  if (kind == "polygon") {
    if (values.size() < 6 || values.size() % 2 != 0) {
      throw InvalidGeometry("curve spec: polygon expects at least 3 coordinate pairs");
    }
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < values.size(); i += 2) v.push_back({values[i], values[i + 1]});
    return BoundaryCurve(ConvexPolygon(std::move(v)));
  }
  throw InvalidGeometry("curve spec: unknown kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// AnnularDomain

double sampled_gap(const BoundaryCurve& outer, const BoundaryCurve& inner, int samples) {
  double gap = std::numeric_limits<double>::infinity();
  for (const Vec2& p : inner.sample(samples)) {
    const double d = outer.distance(p);
    if (!outer.contains(p)) return -d;
    gap = std::min(gap, d);
  }
  for (const Vec2& q : outer.sample(samples)) {
    const double d = inner.distance(q);
    if (inner.contains(q)) return -d;
    gap = std::min(gap, d);
  }
  return gap;
}

AnnularDomain::AnnularDomain(BoundaryCurve outer, BoundaryCurve inner, Vec2 center)
    : outer_(std::move(outer)), inner_(std::move(inner)), center_(center) {
  const double s = outer_.scale();
  if (!inner_.contains(center_, -1e-12 * s)) {
    throw InvalidGeometry("domain center must lie strictly inside the hole");
  }
  min_gap_ = sampled_gap(outer_, inner_);
  if (min_gap_ <= 1e-9 * s) {
    throw ContainmentError("hole is not compactly contained in the outer body");
  }
}

AnnularDomain::AnnularDomain(BoundaryCurve outer, BoundaryCurve inner)
    : AnnularDomain(outer, inner, inner.centroid()) {}

bool AnnularDomain::contains(Vec2 p, double tol) const noexcept {
  return outer_.contains(p, tol) && !inner_.contains(p, -tol);
}

double AnnularDomain::distance(Vec2 p, Side side) const {
  if (side == Side::outer) return outer_.distance(p);
  return inner_.contains(p) ? 0.0 : inner_.distance(p);
}

}  // namespace annulus
