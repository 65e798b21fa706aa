#include "annulus/webfunc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "annulus/errors.hpp"
#include "annulus/parallel.hpp"
#include "annulus/quadrature.hpp"

namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kGaussOrder = 4;

// Segment of the ray from the domain center between the hole and the outer curve.
struct Ray {
  Vec2 origin;
  Vec2 dir;
  double r_in = 0.0;
  double r_out = 0.0;

  double radius(double rho) const { return r_in + rho * (r_out - r_in); }
  Vec2 at(double rho) const { return origin + radius(rho) * dir; }
};

Ray make_ray(const AnnularDomain& d, double theta) {
  const Vec2 c = d.center();
  return {c, unit_direction(theta), d.inner().ray_radius(c, theta), d.outer().ray_radius(c, theta)};
}

double d_inner(const AnnularDomain& d, const Ray& ray, double rho) { return d.distance(ray.at(rho), Side::inner); }
double d_outer(const AnnularDomain& d, const Ray& ray, double rho) { return d.distance(ray.at(rho), Side::outer); }

template <class F>
double root_in(F f, double lo, double hi) {
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

// d_i grows along the ray; returns where it reaches s (1 when it never does).
double rho_inner_level(const AnnularDomain& d, const Ray& ray, double s) {
  if (s <= 0.0) return 0.0;
  const double end = d_inner(d, ray, 1.0);
  if (end <= s) return 1.0;
  return root_in([&](double rho) { return d_inner(d, ray, rho) - s; }, 0.0, 1.0);
}

// d_o is concave along the ray and vanishes at rho = 1; returns the interval
// where d_o > c (empty when lo >= hi).
std::pair<double, double> rho_outer_superlevel(const AnnularDomain& d, const Ray& ray, double c) {
  if (c <= 0.0) return {0.0, 1.0};
  auto f = [&](double rho) { return d_outer(d, ray, rho); };
  // Golden-section search for the maximum of a concave function.
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0;
  double b = 1.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int k = 0; k < 60 && b - a > 1e-13; ++k) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    }
  }
  double peak = 0.5 * (a + b);
  double fmax = f(peak);
  const double f0 = f(0.0);
  if (f0 >= fmax) {
    peak = 0.0;
    fmax = f0;
  }
  if (fmax <= c) return {1.0, 1.0};
  const double lo = f0 > c ? 0.0 : root_in([&](double r) { return f(r) - c; }, 0.0, peak);
  const double hi = root_in([&](double r) { return f(r) - c; }, peak, 1.0);
  return {lo, hi};
}

// Angular panels with polygon corners as breakpoints.
struct AngularRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

AngularRule angular_rule(const AnnularDomain& d, int panels) {
  std::vector<double> breaks;
  for (int k = 0; k <= panels; ++k) breaks.push_back(2.0 * kPi * k / panels);
  for (const BoundaryCurve* c : {&d.inner(), &d.outer()}) {
    for (double a : c->corner_angles(d.center())) {
      double t = std::fmod(a, 2.0 * kPi);
      if (t < 0.0) t += 2.0 * kPi;
      breaks.push_back(t);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end(),
                           [](double x, double y) { return std::abs(x - y) < 1e-14; }),
               breaks.end());
  const GaussRule& g = gauss_legendre(kGaussOrder);
  AngularRule rule;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const double a = breaks[k];
    const double b = breaks[k + 1];
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      rule.nodes.push_back(0.5 * (a + b) + 0.5 * (b - a) * g.nodes[q]);
      rule.weights.push_back(0.5 * (b - a) * g.weights[q]);
    }
  }
  return rule;
}

void require_class_s(const AnnularDomain& domain, const RadialEigenResult& radial) {
  const ClassSData data = class_s_data(domain);
  if (!(data.relative_residual() <= 1e-8)) {
    throw Infeasible("domain is not in class S (relative residual " + std::to_string(data.relative_residual()) +
                     ")");
  }
  if (radial.shell.dim != 2) throw DomainError("web function needs the two-dimensional radial profile");
  const double tol = 1e-9 * data.r_outer;
  if (std::abs(radial.shell.r_inner - data.r_inner) > tol || std::abs(radial.shell.r_outer - data.r_outer) > tol) {
    throw DomainError("radial profile does not belong to the matching shell");
  }
}

}  // namespace

double inner_sublevel_area(const AnnularDomain& domain, double s, int panels) {
  const AngularRule rule = angular_rule(domain, panels);
  double area = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const Ray ray = make_ray(domain, rule.nodes[k]);
    const double r = ray.radius(rho_inner_level(domain, ray, s));
    area += rule.weights[k] * 0.5 * (r * r - ray.r_in * ray.r_in);
  }
  return area;
}

double find_split(const AnnularDomain& domain, const RadialEigenResult& radial, int panels) {
  require_class_s(domain, radial);
  const double r1 = radial.shell.r_inner;
  const double target = kPi * (radial.r_bar * radial.r_bar - r1 * r1);
  if (target > domain.area() * (1.0 + 1e-12)) throw Infeasible("target inner area exceeds |Omega|");
  // max d_i is attained on the outer boundary.
  double s_max = 0.0;
  for (int k = 0; k < 4096; ++k) {
    const Ray ray = make_ray(domain, 2.0 * kPi * k / 4096);
    s_max = std::max(s_max, d_inner(domain, ray, 1.0));
  }
  if (target >= inner_sublevel_area(domain, s_max, panels)) return s_max;
  if (target <= 0.0) return 0.0;
  const AngularRule rule = angular_rule(domain, panels);
  std::vector<Ray> rays;
  rays.reserve(rule.nodes.size());
  for (double th : rule.nodes) rays.push_back(make_ray(domain, th));
  auto area_minus_target = [&](double s) {
    double area = 0.0;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      const double r = rays[k].radius(rho_inner_level(domain, rays[k], s));
      area += rule.weights[k] * 0.5 * (r * r - rays[k].r_in * rays[k].r_in);
    }
    return area - target;
  };
  return root_in(area_minus_target, 0.0, s_max);
}

WebFunction::WebFunction(AnnularDomain domain, RadialEigenResult radial, WebOptions options)
    : domain_(std::move(domain)), profiles_(std::move(radial)), options_(options) {
  const RadialEigenResult& rad = profiles_.radial();
  s_star_ = find_split(domain_, rad, options_.area_panels);
  const double r1 = rad.shell.r_inner;
  target_area_ = kPi * (rad.r_bar * rad.r_bar - r1 * r1);
  inner_area_ = inner_sublevel_area(domain_, s_star_, options_.area_panels);

  const double inner_value = s_star_ < profiles_.inner_width() ? profiles_.G_inner(s_star_) : rad.v_M;
  for (int k = 0; k < options_.interface_samples; ++k) {
    const Ray ray = make_ray(domain_, 2.0 * kPi * k / options_.interface_samples);
    if (d_inner(domain_, ray, 1.0) < s_star_) {
      outer_touches_mi_ = true;
      continue;
    }
    const double rho = rho_inner_level(domain_, ray, s_star_);
    const double d_o = d_outer(domain_, ray, rho);
    const double outer_value = d_o < profiles_.outer_width() ? profiles_.G_outer(d_o) : rad.v_M;
    interface_jump_ = std::max(interface_jump_, std::abs(outer_value - inner_value));
  }
}

double WebFunction::value(Vec2 x) const {
  const double di = domain_.distance(x, Side::inner);
  if (di < s_star_) return di < profiles_.inner_width() ? profiles_.G_inner(di) : radial().v_M;
  const double d_o = domain_.distance(x, Side::outer);
  return d_o < profiles_.outer_width() ? profiles_.G_outer(d_o) : radial().v_M;
}

double WebFunction::gradient_norm(Vec2 x) const {
  const double di = domain_.distance(x, Side::inner);
  if (di < s_star_) return di < profiles_.inner_width() ? std::abs(profiles_.G_inner_derivative(di)) : 0.0;
  const double d_o = domain_.distance(x, Side::outer);
  return d_o < profiles_.outer_width() ? std::abs(profiles_.G_outer_derivative(d_o)) : 0.0;
}

double evaluate_w(const WebFunction& web, Vec2 x) {
  const double tol = 1e-12 * web.domain().scale();
  if (!web.domain().contains(x, tol)) throw DomainError("point lies outside the closed domain");
  return web.value(x);
}

RayleighParts rayleigh_quotient(const WebFunction& web, double beta, int quad_level, bool allow_discontinuous,
                                int threads) {
  if (quad_level < 1) throw RangeError("quadrature level must be positive");
  if (!(beta >= 0.0) || std::isinf(beta)) throw DomainError("beta must be finite and nonnegative");
  if (!web.continuous() && !allow_discontinuous) {
    throw NumericalFailure("web function is not continuity-certified (interface jump " +
                           std::to_string(web.interface_jump()) + ")");
  }
  const AnnularDomain& d = web.domain();
  const WebProfiles& prof = web.profiles();
  const double s_star = web.s_star();
  const double w_in = prof.inner_width();
  const double w_out = prof.outer_width();
  const double v_max = web.radial().v_M;
  const AngularRule rule = angular_rule(d, quad_level);
  const GaussRule& g = gauss_legendre(kGaussOrder);

  struct Partial {
    double grad = 0.0;
    double mass = 0.0;
    double area = 0.0;
  };
  std::vector<Partial> partial(rule.nodes.size());
  parallel_for(rule.nodes.size(), threads, [&](std::size_t k) {
    const Ray ray = make_ray(d, rule.nodes[k]);
    std::vector<double> breaks{0.0, 1.0};
    const double rho_s = rho_inner_level(d, ray, s_star);
    breaks.push_back(rho_s);
    if (w_in < s_star) breaks.push_back(rho_inner_level(d, ray, w_in));
    if (w_out > 0.0) {
      const auto [lo, hi] = rho_outer_superlevel(d, ray, w_out);
      if (lo < hi) {
        breaks.push_back(lo);
        breaks.push_back(hi);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    Partial p;
    const double jac_rho = ray.r_out - ray.r_in;
    for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double a0 = breaks[b];
      const double a1 = breaks[b + 1];
      if (!(a1 > a0)) continue;
      const int cells = std::max(1, static_cast<int>(std::ceil(quad_level * (a1 - a0))));
      const double hcell = (a1 - a0) / cells;
      for (int c = 0; c < cells; ++c) {
        const double lo = a0 + c * hcell;
        for (std::size_t q = 0; q < g.nodes.size(); ++q) {
          const double rho = lo + 0.5 * hcell * (1.0 + g.nodes[q]);
          const double wq = 0.5 * hcell * g.weights[q] * ray.radius(rho) * jac_rho;
          const Vec2 x = ray.at(rho);
          const double di = d.distance(x, Side::inner);
          double w = v_max;
          double grad = 0.0;
          if (di < s_star) {
            if (di < w_in) {
              w = prof.G_inner(di);
              grad = prof.G_inner_derivative(di);
            }
          } else {
            const double d_o = d.distance(x, Side::outer);
            if (d_o < w_out) {
              w = prof.G_outer(d_o);
              grad = prof.G_outer_derivative(d_o);
            }
          }
          p.grad += wq * grad * grad;
          p.mass += wq * w * w;
          p.area += wq;
        }
      }
    }
    partial[k] = p;
  });
  RayleighParts parts;
  parts.quad_level = quad_level;
  for (std::size_t k = 0; k < partial.size(); ++k) {
    parts.gradient += rule.weights[k] * partial[k].grad;
    parts.mass += rule.weights[k] * partial[k].mass;
    parts.area += rule.weights[k] * partial[k].area;
  }
  double boundary = 0.0;
  for (const BoundaryNode& node : d.outer().arclength_rule(4 * quad_level, kGaussOrder)) {
    const double w = web.value(node.point);
    boundary += node.weight * w * w;
  }
  parts.boundary = beta * boundary;
  parts.value = (parts.gradient + parts.boundary) / parts.mass;
  return parts;
}

ComparisonCurves comparison_curves(const WebFunction& web, int n_levels) {
  if (n_levels < 2) throw RangeError("need at least two levels");
  const AnnularDomain& d = web.domain();
  const WebProfiles& prof = web.profiles();
  const RadialEigenResult& rad = web.radial();
  const double r1 = rad.shell.r_inner;
  const double r2 = rad.shell.r_outer;
  const double s_star = web.s_star();
  const int panels = web.options().area_panels;
  const AngularRule rule = angular_rule(d, panels);
  std::vector<Ray> rays;
  rays.reserve(rule.nodes.size());
  std::vector<double> rho_star;
  for (double th : rule.nodes) {
    rays.push_back(make_ray(d, th));
    rho_star.push_back(rho_inner_level(d, rays.back(), s_star));
  }
  auto outer_measure = [&](double s_o) {
    double area = 0.0;
    for (std::size_t k = 0; k < rays.size(); ++k) {
      auto [lo, hi] = rho_outer_superlevel(d, rays[k], s_o);
      lo = std::max(lo, rho_star[k]);
      if (hi <= lo) continue;
      const double a = rays[k].radius(lo);
      const double b = rays[k].radius(hi);
      area += rule.weights[k] * 0.5 * (b * b - a * a);
    }
    return area;
  };

  constexpr int kSides = 1024;
  const ConvexPolygon outer_poly = d.outer().polygonize(kSides);
  const ConvexPolygon hole_poly = d.inner().polygonize(kSides);
  const ConvexPolygon omega_i_full = outer_parallel_polygon(hole_poly, s_star, 2.0 * kPi / kSides);
  const auto omega_i = clip_convex(omega_i_full, outer_poly);

  ComparisonCurves out;
  out.tolerance = 1e-6;
  const double area = d.area();
  const double perimeter = d.outer().perimeter();
  for (int k = 0; k < n_levels; ++k) {
    ComparisonRow row;
    row.t = rad.v_M * k / n_levels;
    const double s_o = row.t <= rad.v_m ? 0.0 : prof.G_outer_inverse(row.t);
    const double r_o = r2 - s_o;
    row.mu_o = outer_measure(s_o);
    row.eta_o = kPi * (r_o * r_o - rad.r_bar * rad.r_bar);
    const double delta = prof.G_inner_inverse(row.t);
    const double r_i = r1 + delta;
    row.mu_i = inner_sublevel_area(d, std::min(delta, s_star), panels);
    row.eta_i = kPi * (r_i * r_i - r1 * r1);
    out.outer_measure_violation = std::max(out.outer_measure_violation, (row.eta_o - row.mu_o) / area);
    out.inner_measure_violation = std::max(out.inner_measure_violation, (row.mu_i - row.eta_i) / area);
    if (row.t >= rad.v_m) {
      row.perimeter_f_o = 2.0 * kPi * r_o;
      const ConvexPolygon core = inner_parallel(outer_poly, s_o);
      row.perimeter_e_o = omega_i ? union_perimeter(*omega_i, core) : core.perimeter();
      out.perimeter_violation =
          std::max(out.perimeter_violation, (row.perimeter_e_o - row.perimeter_f_o) / perimeter);
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace annulus
