#include "annulus/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/io.hpp"
#include "annulus/parallel.hpp"

namespace annulus {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 curve_center(const BoundaryCurve& c) {
  if (const auto* circ = c.circle()) return circ->center;
  if (const auto* e = c.ellipse()) return e->center;
  return c.centroid();
}

std::string resolution_tag(Resolution r) {
  return std::to_string(r.n_radial) + "x" + std::to_string(r.n_angular);
}

}  // namespace

InequalityReport make_report(std::string name, double lhs, double rhs, double tolerance, std::string method) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.tolerance = tolerance;
  r.pass = r.margin >= -tolerance;
  r.method = std::move(method);
  return r;
}

// ---------------------------------------------------------------------------

PerturbationField PerturbationField::normal_fourier(FieldTarget target, int mode, double amplitude) {
  if (target == FieldTarget::both) throw DomainError("normal Fourier fields act on a single curve");
  if (mode < 0) throw RangeError("Fourier mode must be nonnegative");
  PerturbationField f;
  f.kind_ = Kind::normal_fourier;
  f.target_ = target;
  f.mode_ = mode;
  f.amplitude_ = amplitude;
  return f;
}

PerturbationField PerturbationField::translation(FieldTarget target, Vec2 vector) {
  PerturbationField f;
  f.kind_ = Kind::translation;
  f.target_ = target;
  f.vector_ = vector;
  return f;
}

bool PerturbationField::acts_on(Side side) const noexcept {
  if (target_ == FieldTarget::both) return true;
  return (target_ == FieldTarget::outer) == (side == Side::outer);
}

Vec2 PerturbationField::value(const BoundaryCurve& curve, Side side, Vec2 x) const {
  if (!acts_on(side)) return {};
  if (kind_ == Kind::translation) return vector_;
  const Vec2 d = x - curve_center(curve);
  const double theta = std::atan2(d.y, d.x);
  return (amplitude_ * std::cos(mode_ * theta)) * curve.outward_normal(x);
}

std::string PerturbationField::describe() const {
  const char* t = target_ == FieldTarget::outer ? "outer" : target_ == FieldTarget::inner ? "inner" : "both";
  std::ostringstream os;
  if (kind_ == Kind::translation) {
    os << "translation(" << format_double(vector_.x) << "," << format_double(vector_.y) << ";" << t << ")";
  } else {
    os << "normal_fourier(m=" << mode_ << ",a=" << format_double(amplitude_) << ";" << t << ")";
  }
  return os.str();
}

Mesh perturbed_mesh(const Mesh& base, const AnnularDomain& domain, const PerturbationField& field, double t) {
  if (base.n_radial <= 0 || base.n_angular <= 0) throw DomainError("perturbation needs a structured mesh");
  Mesh m = base;
  for (int j = 0; j < base.n_angular; ++j) {
    const Vec2 xin = base.nodes[static_cast<std::size_t>(base.node(0, j))];
    const Vec2 xout = base.nodes[static_cast<std::size_t>(base.node(base.n_radial, j))];
    const Vec2 vin = field.value(domain.inner(), Side::inner, xin);
    const Vec2 vout = field.value(domain.outer(), Side::outer, xout);
    for (int i = 0; i <= base.n_radial; ++i) {
      const double rho = static_cast<double>(i) / base.n_radial;
      auto& x = m.nodes[static_cast<std::size_t>(base.node(i, j))];
      x = x + t * ((1.0 - rho) * vin + rho * vout);
    }
  }
  for (const auto& tri : m.triangles) {
    const Vec2 a = m.nodes[static_cast<std::size_t>(tri[0])];
    const Vec2 b = m.nodes[static_cast<std::size_t>(tri[1])];
    const Vec2 c = m.nodes[static_cast<std::size_t>(tri[2])];
    if (!(cross(b - a, c - a) > 0.0)) throw Infeasible("perturbation step inverts the mesh");
  }
  return m;
}

double shape_derivative_formula(const AnnularDomain& domain, double beta, const PerturbationField& field,
                                const FemEigenResult& fem) {
  if (!domain.outer().is_smooth() || !domain.inner().is_smooth()) {
    throw CurvatureUnavailable("the shape derivative needs smooth boundary curves");
  }
  const Mesh& mesh = fem.mesh;
  const std::vector<double>& u = fem.u_h;
  const double lambda = fem.lambda_h;
  const bool dirichlet_outer = std::isinf(beta);
  static const double kXi[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

  // Normal flux at Dirichlet nodes from the residual of the full (unreduced) system.
  const FullMatrices full = assemble_full(mesh);
  std::vector<double> residual = full.stiffness * std::span<const double>(u);
  const std::vector<double> mu = full.mass * std::span<const double>(u);
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= lambda * mu[i];
  std::vector<double> lumped(mesh.node_count(), 0.0);
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag == Side::outer && !dirichlet_outer) continue;
    const double len = norm(mesh.nodes[static_cast<std::size_t>(e.b)] - mesh.nodes[static_cast<std::size_t>(e.a)]);
    lumped[static_cast<std::size_t>(e.a)] += 0.5 * len;
    lumped[static_cast<std::size_t>(e.b)] += 0.5 * len;
  }
  auto flux = [&](int node) { return residual[static_cast<std::size_t>(node)] / lumped[static_cast<std::size_t>(node)]; };

  double total = 0.0;
  for (const auto& e : mesh.boundary_edges) {
    const bool outer = e.tag == Side::outer;
    const BoundaryCurve& curve = outer ? domain.outer() : domain.inner();
    const Vec2 xa = mesh.nodes[static_cast<std::size_t>(e.a)];
    const Vec2 xb = mesh.nodes[static_cast<std::size_t>(e.b)];
    const double len = norm(xb - xa);
    const double ua = u[static_cast<std::size_t>(e.a)];
    const double ub = u[static_cast<std::size_t>(e.b)];
    const bool robin = outer && !dirichlet_outer;
    const double qa = robin ? 0.0 : flux(e.a);
    const double qb = robin ? 0.0 : flux(e.b);
    const double us = (ub - ua) / len;
    for (double xi : kXi) {
      const Vec2 p = (1.0 - xi) * xa + xi * xb;
      const Vec2 foot = curve.foot_point(p);
      // Outward normal of the domain: the curve normal on the outer boundary, reversed on the hole.
      const Vec2 nu = outer ? curve.outward_normal(foot) : -1.0 * curve.outward_normal(foot);
      const double vn = dot(field.value(curve, e.tag, foot), nu);
      if (vn == 0.0) continue;
      double integrand = 0.0;
      if (robin) {
        const double uq = (1.0 - xi) * ua + xi * ub;
        const double kappa = curve.curvature(foot);
        integrand = us * us + kappa * beta * uq * uq - (lambda + beta * beta) * uq * uq;
      } else {
        const double q = (1.0 - xi) * qa + xi * qb;
        integrand = -q * q;
      }
      total += 0.5 * len * integrand * vn;
    }
  }
  return total;
}

ShapeDerivativeFd shape_derivative_fd(const AnnularDomain& domain, double beta, const PerturbationField& field,
                                      double t_step, Resolution resolution) {
  if (!(t_step > 0.0)) throw RangeError("finite-difference step must be positive");
  const Mesh base = mesh_annular(domain, resolution.n_radial, resolution.n_angular);
  ShapeDerivativeFd out;
  double lambda0 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double t = t_step / std::pow(2.0, k);
    const double lp = solve_mesh(perturbed_mesh(base, domain, field, t), beta).lambda_h;
    const double lm = solve_mesh(perturbed_mesh(base, domain, field, -t), beta).lambda_h;
    lambda0 = 0.5 * (lp + lm);
    out.steps.push_back(t);
    out.values.push_back((lp - lm) / (2.0 * t));
  }
  out.value = out.values.back();
  out.noise = std::abs(out.values[1] - out.values[2]) + 1e-12 * std::abs(lambda0) / out.steps.back();
  return out;
}

ShapeDerivativeCheck shape_derivative_check(const AnnularDomain& domain, double beta, const PerturbationField& field,
                                            double t_step, Resolution resolution, double noise_factor) {
  ShapeDerivativeCheck c;
  const FemEigenResult fem = solve_domain(domain, beta, resolution.n_radial, resolution.n_angular);
  c.formula = shape_derivative_formula(domain, beta, field, fem);
  c.fd = shape_derivative_fd(domain, beta, field, t_step, resolution);
  c.fd_resolved = std::abs(c.fd.value) > 10.0 * c.fd.noise;
  c.relative_error = std::abs(c.formula - c.fd.value) / std::max(std::abs(c.fd.value), 1e-300);
  c.pass = c.fd_resolved ? c.relative_error <= 0.05 : std::abs(c.formula) <= noise_factor * c.fd.noise;
  return c;
}

// ---------------------------------------------------------------------------

double curve_inradius(const BoundaryCurve& c) {
  if (const auto* circ = c.circle()) return circ->radius;
  if (const auto* e = c.ellipse()) return std::min(e->a, e->b);
  return inradius(*c.polygon());
}

FemEstimate fem_estimate(const AnnularDomain& domain, double beta, Resolution resolution,
                         const EigenOptions& options) {
  if (resolution.n_radial % 2 != 0 || resolution.n_angular % 2 != 0) {
    throw RangeError("error estimate needs even resolutions");
  }
  FemEstimate est;
  est.lambda = solve_domain(domain, beta, resolution.n_radial, resolution.n_angular, options).lambda_h;
  est.lambda_coarse =
      solve_domain(domain, beta, resolution.n_radial / 2, resolution.n_angular / 2, options).lambda_h;
  est.error = richardson(est.lambda, est.lambda_coarse).error;
  return est;
}

std::vector<InequalityReport> kuttler_bounds(const AnnularDomain& domain, double beta, Resolution resolution) {
  if (!(beta > 0.0) || std::isinf(beta)) throw DomainError("bounds need a finite positive beta");
  const FemEstimate l = fem_estimate(domain, beta, resolution);
  const FemEstimate ldd = fem_estimate(domain, kInfiniteBeta, resolution);
  const double area = domain.area();
  const double per = domain.outer().perimeter();
  const double rho = curve_inradius(domain.outer());
  const std::string method = "fem P1 " + resolution_tag(resolution) + " (Richardson error from half resolution)";
  const double gap = 1.0 / l.lambda - 1.0 / ldd.lambda;
  const double gap_err = l.error / (l.lambda * l.lambda) + ldd.error / (ldd.lambda * ldd.lambda);
  return {
      make_report("lambda <= lambda_DD", l.lambda, ldd.lambda, std::max(1e-8, 2.0 * (l.error + ldd.error)), method),
      make_report("1/lambda - 1/lambda_DD <= |Omega|/(beta P)", gap, area / (beta * per),
                  std::max(1e-8, 2.0 * gap_err), method),
      make_report("1/lambda - 1/lambda_DD <= rho/beta", gap, rho / beta, std::max(1e-8, 2.0 * gap_err), method),
  };
}

std::vector<InequalityReport> kuttler_bounds(const ShellSpec& shell, double beta) {
  if (!(beta > 0.0) || std::isinf(beta)) throw DomainError("bounds need a finite positive beta");
  const double l = solve_shell(shell, beta).lambda;
  const double ldd = solve_shell(shell, kInfiniteBeta).lambda;
  const double gap = 1.0 / l - 1.0 / ldd;
  const double vol = shell_volume(shell);
  const double per = ball_perimeter(shell.dim, shell.r_outer);
  const std::string method = "radial shooting";
  return {
      make_report("lambda <= lambda_DD", l, ldd, 1e-8, method),
      make_report("1/lambda - 1/lambda_DD <= |Omega|/(beta P)", gap, vol / (beta * per), 1e-8, method),
      make_report("1/lambda - 1/lambda_DD <= rho/beta", gap, shell.r_outer / beta, 1e-8, method),
  };
}

std::vector<InequalityReport> polygon_inequalities(const ConvexPolygon& p, const std::string& label) {
  const double rho = inradius(p);
  const double ratio = p.area() / p.perimeter();
  const double tol = 1e-8;
  const std::string method = "exact polygon geometry";
  return {
      make_report(label + ": rho/2 <= |E|/P", 0.5 * rho, ratio, tol, method),
      make_report(label + ": |E|/P <= rho", ratio, rho, tol, method),
      make_report(label + ": sqrt(|E|/pi) <= P/(2 pi)", std::sqrt(p.area() / kPi), p.perimeter() / (2.0 * kPi), tol,
                  method),
  };
}

std::vector<double> beta_grid(int points_per_decade) {
  if (points_per_decade < 1) throw RangeError("need at least one point per decade");
  std::vector<double> b;
  const int n = 7 * points_per_decade;
  for (int k = 0; k <= n; ++k) b.push_back(std::pow(10.0, -3.0 + static_cast<double>(k) / points_per_decade));
  return b;
}

namespace {

void finish_limits(BetaLimitsReport& r, double area, double perimeter) {
  r.strictly_increasing = true;
  r.nondecreasing = true;
  for (std::size_t k = 1; k < r.lambdas.size(); ++k) {
    if (!(r.lambdas[k] > r.lambdas[k - 1])) r.strictly_increasing = false;
    if (r.lambdas[k] < r.lambdas[k - 1]) r.nondecreasing = false;
  }
  r.nd_relative_gap = std::abs(r.lambdas.front() - r.lambda_nd) / r.lambda_nd;
  r.dd_gap = 1.0 / r.lambdas.back() - 1.0 / r.lambda_dd;
  r.dd_bound = area / (r.betas.back() * perimeter);
}

}  // namespace

BetaLimitsReport beta_limits_check(const ShellSpec& shell, int points_per_decade) {
  BetaLimitsReport r;
  r.method = "radial shooting";
  r.betas = beta_grid(points_per_decade);
  for (double b : r.betas) r.lambdas.push_back(solve_shell(shell, b).lambda);
  r.lambda_nd = solve_shell(shell, 0.0).lambda;
  r.lambda_dd = solve_shell(shell, kInfiniteBeta).lambda;
  finish_limits(r, shell_volume(shell), ball_perimeter(shell.dim, shell.r_outer));
  return r;
}

BetaLimitsReport beta_limits_check(const AnnularDomain& domain, Resolution resolution, int points_per_decade) {
  BetaLimitsReport r;
  r.method = "fem P1 " + resolution_tag(resolution);
  const Mesh mesh = mesh_annular(domain, resolution.n_radial, resolution.n_angular);
  r.betas = beta_grid(points_per_decade);
  for (double b : r.betas) r.lambdas.push_back(solve_mesh(mesh, b).lambda_h);
  r.lambda_nd = solve_mesh(mesh, 0.0).lambda_h;
  r.lambda_dd = solve_mesh(mesh, kInfiniteBeta).lambda_h;
  finish_limits(r, domain.area(), domain.outer().perimeter());
  return r;
}

BetaDerivativeCheck beta_derivative_check(const AnnularDomain& domain, double beta, Resolution resolution) {
  if (!(beta > 0.0) || std::isinf(beta)) throw DomainError("beta derivative needs a finite positive beta");
  const Mesh mesh = mesh_annular(domain, resolution.n_radial, resolution.n_angular);
  const double h = 1e-4 * beta;
  BetaDerivativeCheck c;
  c.formula = solve_mesh(mesh, beta).beta_derivative;
  c.fd = (solve_mesh(mesh, beta + h).lambda_h - solve_mesh(mesh, beta - h).lambda_h) / (2.0 * h);
  c.relative_error = std::abs(c.fd - c.formula) / std::abs(c.formula);
  return c;
}

// ---------------------------------------------------------------------------

std::vector<NamedDomain> eccentric_family(double r_inner, double r_outer, const std::vector<double>& fractions,
                                          double gap) {
  if (!(r_inner > 0.0 && r_outer > r_inner)) throw InvalidGeometry("need 0 < R1 < R2");
  if (!(gap > 0.0 && gap < r_outer - r_inner)) throw InvalidGeometry("gap must lie in (0, R2 - R1)");
  std::vector<NamedDomain> out;
  for (double f : fractions) {
    if (!(f >= 0.0 && f <= 1.0)) throw RangeError("offset fraction must lie in [0, 1]");
    const double offset = f * (r_outer - r_inner - gap);
    const Vec2 c{offset, 0.0};
    std::ostringstream name;
    name << "eccentric offset=" << std::setprecision(6) << offset;
    out.push_back({name.str(),
                   AnnularDomain(BoundaryCurve(Circle{{0.0, 0.0}, r_outer}), BoundaryCurve(Circle{c, r_inner}), c)});
  }
  return out;
}

NamedDomain ellipse_rectangle_member(double a, double b, double width, double height) {
  const BoundaryCurve outer(Ellipse{{0.0, 0.0}, a, b});
  const HoleScaling hs = scale_hole_to_class_s(outer, BoundaryCurve(ConvexPolygon::rectangle(width, height)));
  std::ostringstream name;
  name << std::setprecision(6) << "ellipse(" << a << "," << b << ") rectangle(" << width << "x" << height
       << ") scale=" << *hs.scale;
  return {name.str(), AnnularDomain(outer, *hs.hole)};
}

std::vector<NamedDomain> standard_suite() {
  std::vector<NamedDomain> suite = eccentric_family(1.0, 2.0, {0.0, 0.1, 0.3, 0.5, 0.7, 0.9}, 0.1);
  suite.front().name = "concentric";
  suite.push_back(ellipse_rectangle_member(2.0, 1.0, 1.5, 0.1));
  suite.push_back(ellipse_rectangle_member(1.8, 1.2, 1.0, 0.2));
  return suite;
}

ConvexPolygon random_convex_polygon(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> sides(3, 12);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int n = sides(rng);
    const double b = 0.3 + 0.7 * unit(rng);
    const double rot = 2.0 * kPi * unit(rng);
    std::vector<double> angles(static_cast<std::size_t>(n));
    for (double& a : angles) a = 2.0 * kPi * unit(rng);
    std::sort(angles.begin(), angles.end());
    bool spread = true;
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const double next = k + 1 < angles.size() ? angles[k + 1] : angles[0] + 2.0 * kPi;
      if (next - angles[k] < 0.05) spread = false;
    }
    if (!spread) continue;
    std::vector<Vec2> v;
    for (double a : angles) {
      const Vec2 q{std::cos(a), b * std::sin(a)};
      v.push_back({std::cos(rot) * q.x - std::sin(rot) * q.y, std::sin(rot) * q.x + std::cos(rot) * q.y});
    }
    try {
      ConvexPolygon p(std::move(v));
      return p.scaled(1.0 / inradius(p), chebyshev_center(p));
    } catch (const InvalidGeometry&) {
      continue;
    }
  }
}

std::vector<InequalityReport> main_theorem_sweep(const std::vector<NamedDomain>& family, double beta,
                                                 Resolution resolution, int threads) {
  std::vector<InequalityReport> reports(family.size());
  for (const auto& member : family) {
    const ClassSData data = class_s_data(member.domain);
    if (!(data.relative_residual() <= 1e-8)) {
      throw Infeasible(member.name + " is not in class S (relative residual " + format_double(data.relative_residual()) +
                       ")");
    }
  }
  parallel_for(family.size(), threads, [&](std::size_t k) {
    const auto& member = family[k];
    const ClassSData data = class_s_data(member.domain);
    const FemEstimate fem = fem_estimate(member.domain, beta, resolution);
    const double radial = solve_shell(ShellSpec{2, data.r_inner, data.r_outer}, beta).lambda;
    reports[k] = make_report(member.name + " beta=" + format_double(beta), fem.lambda, radial,
                             std::max(1e-8, 2.0 * fem.error),
                             "fem P1 " + resolution_tag(resolution) + " vs radial shooting");
  });
  return reports;
}

StructureReport eigenfunction_structure(double r_inner, double r_outer, double beta, Resolution resolution) {
  const AnnularDomain d(BoundaryCurve(Circle{{0.0, 0.0}, r_outer}), BoundaryCurve(Circle{{0.0, 0.0}, r_inner}),
                        Vec2{0.0, 0.0});
  const FemEigenResult fem = solve_domain(d, beta, resolution.n_radial, resolution.n_angular);
  const RadialEigenResult rad = solve_shell(ShellSpec{2, r_inner, r_outer}, beta);
  StructureReport s;
  s.r_bar = rad.r_bar;
  s.argmax_radius = norm(fem.mesh.nodes[fem.argmax()]);
  s.cell_size = (r_outer - r_inner) / resolution.n_radial;
  for (std::size_t k = 1; k < rad.profile.size(); ++k) {
    const double a = rad.profile[k - 1].dphi;
    const double b = rad.profile[k].dphi;
    if ((a > 0.0 && b <= 0.0) || (a < 0.0 && b >= 0.0)) ++s.critical_points;
  }
  return s;
}

}  // namespace annulus
