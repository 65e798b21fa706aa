#pragma once

// Planar convex-body geometry: polygons, analytic boundary curves, annular
// domains, quermassintegrals and the class-S matching data.

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace annulus {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) noexcept {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) noexcept {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) noexcept { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) noexcept { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) noexcept { return std::hypot(a.x, a.y); }
inline Vec2 unit_direction(double angle) noexcept { return {std::cos(angle), std::sin(angle)}; }

/// Counterclockwise convex polygon. Construction validates orientation,
/// convexity (up to a collinearity tolerance of 1e-12 * scale^2) and simplicity.
class ConvexPolygon {
 public:
  explicit ConvexPolygon(std::vector<Vec2> vertices);

  static ConvexPolygon regular(int sides, double circumradius, Vec2 center = {},
                               double phase = 0.0);
  static ConvexPolygon rectangle(double width, double height, Vec2 center = {});

  std::span<const Vec2> vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  Vec2 vertex(std::size_t i) const noexcept { return vertices_[i % vertices_.size()]; }

  double area() const noexcept;
  double perimeter() const noexcept;
  Vec2 centroid() const noexcept;
  /// Length scale used for relative tolerances (half the bounding-box diagonal).
  double scale() const noexcept;

  /// Closed-set membership with an absolute slack `tol`.
  bool contains(Vec2 p, double tol = 0.0) const noexcept;
  /// Euclidean distance from p to the polygon boundary (inside or outside).
  double boundary_distance(Vec2 p) const noexcept;
  /// Closest boundary point and the outward unit normal there.
  Vec2 closest_boundary_point(Vec2 p) const noexcept;
  /// min over edges of the inward signed distance; positive strictly inside.
  double depth(Vec2 p) const noexcept;

  ConvexPolygon translated(Vec2 shift) const;
  ConvexPolygon scaled(double factor, Vec2 about) const;

 private:
  std::vector<Vec2> vertices_;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;
};

/// Axis-aligned ellipse with semi-axes a (along x) and b (along y).
struct Ellipse {
  Vec2 center;
  double a = 0.0;
  double b = 0.0;
};

/// Sample of a boundary curve together with an arc-length quadrature weight.
struct BoundaryNode {
  Vec2 point;
  Vec2 normal;  // outward unit normal of the enclosed region
  double weight = 0.0;
};

/// Closed convex curve: circle, axis-aligned ellipse or convex polygon.
class BoundaryCurve {
 public:
  enum class Kind { circle, ellipse, polygon };

  BoundaryCurve(Circle c);
  BoundaryCurve(Ellipse e);
  BoundaryCurve(ConvexPolygon p);

  Kind kind() const noexcept;
  bool is_smooth() const noexcept { return kind() != Kind::polygon; }
  const Circle* circle() const noexcept { return std::get_if<Circle>(&shape_); }
  const Ellipse* ellipse() const noexcept { return std::get_if<Ellipse>(&shape_); }
  const ConvexPolygon* polygon() const noexcept { return std::get_if<ConvexPolygon>(&shape_); }

  double area() const;
  /// Exact for circles and polygons; adaptive Gauss-Kronrod (1e-12 relative) for ellipses.
  double perimeter() const;
  Vec2 centroid() const noexcept;
  double scale() const noexcept;

  bool contains(Vec2 p, double tol = 0.0) const noexcept;
  /// Unsigned distance from p to the curve.
  double distance(Vec2 p) const;
  /// Closest point of the curve to p.
  Vec2 foot_point(Vec2 p) const;
  /// Outward unit normal at a point of the curve (polygons: normal of the nearest edge).
  Vec2 outward_normal(Vec2 on_curve) const;
  /// Signed curvature at a point of the curve; throws CurvatureUnavailable for polygons.
  double curvature(Vec2 on_curve) const;

  /// Distance from `origin` (strictly inside) to the curve along direction `angle`.
  double ray_radius(Vec2 origin, double angle) const;
  /// Polar angles (about `origin`) of polygon corners; empty for smooth curves.
  std::vector<double> corner_angles(Vec2 origin) const;

  /// Inscribed polygon with `sides` vertices; polygons are returned unchanged.
  ConvexPolygon polygonize(int sides) const;
  /// `count` points spread along the curve (polygon vertices always included).
  std::vector<Vec2> sample(int count) const;
  /// Composite Gauss-Legendre arc-length rule with `cells` panels of `order` points.
  std::vector<BoundaryNode> arclength_rule(int cells, int order = 4) const;

  BoundaryCurve translated(Vec2 shift) const;
  BoundaryCurve scaled(double factor, Vec2 about) const;

  /// Text form in the curve grammar (`circle cx cy r`, ...).
  std::string to_spec() const;

 private:
  std::variant<Circle, Ellipse, ConvexPolygon> shape_;
};

/// Parses `circle cx cy r`, `ellipse cx cy a b` or `polygon x1 y1 x2 y2 ...`.
BoundaryCurve parse_curve(std::string_view text);

/// Closest point on an axis-aligned ellipse and the distance to it.
struct EllipseProjection {
  Vec2 point;
  double distance = 0.0;
};
EllipseProjection project_onto_ellipse(const Ellipse& e, Vec2 p);

/// Perimeter of the ellipse by adaptive quadrature of the arc-length integral.
double ellipse_perimeter(double a, double b);

enum class Side { outer, inner };

/// Doubly connected planar domain: the outer convex body minus the closed hole.
class AnnularDomain {
 public:
  /// Validates convexity, compact containment (sampled gap) and that `center`
  /// lies strictly inside the hole.
  AnnularDomain(BoundaryCurve outer, BoundaryCurve inner, Vec2 center);
  /// Uses the centroid of the hole as the star-shape reference.
  AnnularDomain(BoundaryCurve outer, BoundaryCurve inner);

  const BoundaryCurve& outer() const noexcept { return outer_; }
  const BoundaryCurve& inner() const noexcept { return inner_; }
  Vec2 center() const noexcept { return center_; }
  double min_gap() const noexcept { return min_gap_; }
  double area() const { return outer_.area() - inner_.area(); }
  double scale() const noexcept { return outer_.scale(); }

  /// x in the closure of the domain, with an absolute slack.
  bool contains(Vec2 p, double tol = 0.0) const noexcept;
  /// Distance from x to the outer boundary (d_o) or to the hole (d_i), no range check.
  double distance(Vec2 p, Side side) const;

 private:
  BoundaryCurve outer_;
  BoundaryCurve inner_;
  Vec2 center_;
  double min_gap_ = 0.0;
};

/// Minimum distance between two nested curves by sampling `samples` points on each.
/// Negative when the inner curve leaves the outer region.
double sampled_gap(const BoundaryCurve& outer, const BoundaryCurve& inner, int samples = 4096);

/// Concentric spherical shell {R1 < |x| < R2} in R^n.
struct ShellSpec {
  int dim = 2;
  double r_inner = 1.0;
  double r_outer = 2.0;

  /// Throws InvalidGeometry unless n >= 2 and 0 < R1 < R2.
  void validate() const;
  double width() const noexcept { return r_outer - r_inner; }
};

// ---------------------------------------------------------------------------
// Operations

double polygon_area(const ConvexPolygon& p);

struct Quermass2d {
  double w0 = 0.0;  // area
  double w1 = 0.0;  // perimeter / 2
  double w2 = 0.0;  // pi
};
Quermass2d quermassintegrals_2d(const ConvexPolygon& p);

/// Volume of the unit ball in R^n.
double unit_ball_volume(int n);
/// W_i(B_R) = omega_n R^{n-i}, for 0 <= i <= n.
double shell_quermass(int n, double radius, int index);
/// Perimeter of a ball of radius R in R^n.
double ball_perimeter(int n, double radius);
/// |A_{R1,R2}| in R^n.
double shell_volume(const ShellSpec& shell);

/// Radius of the largest inscribed disk (Chebyshev center of the edge half-planes).
double inradius(const ConvexPolygon& p);
Vec2 chebyshev_center(const ConvexPolygon& p);

/// Erosion by delta; throws EmptyBody when delta >= inradius.
ConvexPolygon inner_parallel(const ConvexPolygon& p, double delta);

struct ParallelMeasures {
  double area = 0.0;
  double perimeter = 0.0;
};
/// Area and perimeter of P + delta B from the Steiner polynomial.
ParallelMeasures outer_parallel_measures(const ConvexPolygon& p, double delta);

/// d_o or d_i for a point of the closed domain; throws DomainError otherwise.
double distance_to_boundary(Vec2 x, const AnnularDomain& domain, Side side);

/// (W1/omega_2) - (W0/omega_2)^{1/2}; nonnegative, zero only for disks.
double aleksandrov_fenchel_margin(const ConvexPolygon& p);

struct ClassSData {
  double r_inner = 0.0;  // R1 = P(hole) / 2pi
  double r_outer = 0.0;  // R2 = P(outer) / 2pi
  double residual = 0.0;  // |Omega| - pi (R2^2 - R1^2)
  double relative_residual() const noexcept;
};
/// Radii of the matching shell; throws Infeasible if R1 >= R2.
ClassSData class_s_data(const AnnularDomain& domain);

/// Isoperimetric deficit P^2 - 4 pi |K| of the region bounded by a curve.
double isoperimetric_deficit(const BoundaryCurve& c);

struct HoleScaling {
  /// Scale with equal deficits; unset when both deficits vanish (any scale matches).
  std::optional<double> scale;
  /// Largest scale at which the recentred hole is still compactly contained.
  double max_feasible_scale = 0.0;
  /// Scaled and recentred hole (at `scale`, or at half the feasible range).
  std::optional<BoundaryCurve> hole;
  double gap = 0.0;
};
/// Scales `hole_shape` so that its deficit equals the outer deficit and recentres
/// it at the outer centroid. Throws Infeasible or ContainmentError.
HoleScaling scale_hole_to_class_s(const BoundaryCurve& outer, const BoundaryCurve& hole_shape);

// ---------------------------------------------------------------------------
// Convex polygon utilities used by the level-set comparisons.

/// Intersection of two convex polygons; nullopt when it has no interior.
std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject, const ConvexPolygon& clip);
/// Inscribed polygon of P + delta B with arcs split so that every turn is below `max_turn`.
ConvexPolygon outer_parallel_polygon(const ConvexPolygon& p, double delta,
                                     double max_turn = 2.0 * std::numbers::pi / 4096.0);
/// Perimeter of the union of two convex polygons.
double union_perimeter(const ConvexPolygon& a, const ConvexPolygon& b);
/// Area of the union of two convex polygons.
double union_area(const ConvexPolygon& a, const ConvexPolygon& b);

}  // namespace annulus
