#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "annulus/fem.hpp"
#include "annulus/geometry.hpp"
#include "annulus/radial.hpp"

namespace annulus {

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs for lhs <= rhs
  double tolerance = 0.0;
  bool pass = false;
  /// Method and resolution that produced the numbers.
  std::string method;
};

/// lhs <= rhs up to `tolerance`; pass iff margin >= -tolerance.
InequalityReport make_report(std::string name, double lhs, double rhs, double tolerance, std::string method);

// ---------------------------------------------------------------------------
// Boundary velocity fields

enum class FieldTarget { outer, inner, both };

class PerturbationField {
 public:
  enum class Kind { normal_fourier, translation };

  /// V = amplitude cos(m theta) nu on the target curve, theta the polar angle
  /// about the curve's center.
  static PerturbationField normal_fourier(FieldTarget target, int mode, double amplitude);
  static PerturbationField translation(FieldTarget target, Vec2 vector);

  Kind kind() const noexcept { return kind_; }
  FieldTarget target() const noexcept { return target_; }
  bool acts_on(Side side) const noexcept;

  /// V at a point of the given boundary curve (zero off target).
  Vec2 value(const BoundaryCurve& curve, Side side, Vec2 on_curve) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::translation;
  FieldTarget target_ = FieldTarget::both;
  int mode_ = 0;
  double amplitude_ = 0.0;
  Vec2 vector_{};
};

/// Mesh of D moved by t V: boundary nodes move exactly, interior nodes by the
/// radial blend (1 - rho) V(inner node) + rho V(outer node) of their ray.
/// Throws Infeasible if a triangle inverts.
Mesh perturbed_mesh(const Mesh& base, const AnnularDomain& domain, const PerturbationField& field, double t);

/// First domain derivative of lambda in direction V from a FEM eigenpair:
/// outer boundary {|grad u|^2 + kappa beta u^2 - (lambda + 2 beta^2) u^2} V.nu with
/// |grad u|^2 = u_s^2 + beta^2 u^2, inner boundary -(d_nu u)^2 V.nu with the
/// normal flux recovered from the discrete residual. nu is the outward normal
/// of the domain. Throws CurvatureUnavailable for polygonal curves.
double shape_derivative_formula(const AnnularDomain& domain, double beta, const PerturbationField& field,
                                const FemEigenResult& fem);

struct ShapeDerivativeFd {
  std::vector<double> steps;   // t, t/2, t/4
  std::vector<double> values;  // central differences
  double value = 0.0;          // at the smallest step
  double noise = 0.0;          // |FD(t/2) - FD(t/4)| + 1e-12 lambda / (t/4)
};

/// Central differences (lambda(D_{+t}) - lambda(D_{-t})) / 2t on matched meshes.
ShapeDerivativeFd shape_derivative_fd(const AnnularDomain& domain, double beta, const PerturbationField& field,
                                      double t_step, Resolution resolution);

struct ShapeDerivativeCheck {
  double formula = 0.0;
  ShapeDerivativeFd fd;
  double relative_error = 0.0;
  bool fd_resolved = false;  // |FD| > 10 noise
  bool pass = false;
};
/// Relative error <= 5% when the FD value is resolved, otherwise
/// |formula| <= noise_factor * noise.
ShapeDerivativeCheck shape_derivative_check(const AnnularDomain& domain, double beta, const PerturbationField& field,
                                            double t_step, Resolution resolution, double noise_factor = 1.0);

// ---------------------------------------------------------------------------
// Bounds and limits

/// Radius of the largest disk inside the region bounded by the curve.
double curve_inradius(const BoundaryCurve& c);

/// FEM eigenvalue at `resolution` with the Richardson error estimate from the
/// half resolution.
struct FemEstimate {
  double lambda = 0.0;
  double error = 0.0;
  double lambda_coarse = 0.0;
};
FemEstimate fem_estimate(const AnnularDomain& domain, double beta, Resolution resolution,
                         const EigenOptions& options = {});

/// lambda <= lambda_DD, 1/lambda - 1/lambda_DD <= |Omega| / (beta P(Omega0)) and
/// the inradius form <= rho(Omega0) / beta.
std::vector<InequalityReport> kuttler_bounds(const AnnularDomain& domain, double beta, Resolution resolution);
/// Same bounds with radial eigenvalues on a shell.
std::vector<InequalityReport> kuttler_bounds(const ShellSpec& shell, double beta);

/// rho/2 <= |E|/P <= rho and the 2D Aleksandrov-Fenchel inequality for a polygon.
std::vector<InequalityReport> polygon_inequalities(const ConvexPolygon& p, const std::string& label);

struct BetaLimitsReport {
  std::vector<double> betas;
  std::vector<double> lambdas;
  double lambda_nd = 0.0;
  double lambda_dd = 0.0;
  bool strictly_increasing = false;
  bool nondecreasing = false;
  double nd_relative_gap = 0.0;  // |lambda(beta_min) - lambda_ND| / lambda_ND
  double dd_gap = 0.0;           // 1/lambda(beta_max) - 1/lambda_DD
  double dd_bound = 0.0;         // |Omega| / (beta_max P(Omega0))
  std::string method;
};
/// Log grid 1e-3 .. 1e4 (points_per_decade per decade).
std::vector<double> beta_grid(int points_per_decade = 1);
BetaLimitsReport beta_limits_check(const ShellSpec& shell, int points_per_decade = 1);
BetaLimitsReport beta_limits_check(const AnnularDomain& domain, Resolution resolution, int points_per_decade = 1);

struct BetaDerivativeCheck {
  double formula = 0.0;  // u^T B u / u^T M u
  double fd = 0.0;       // centered difference with step 1e-4 beta
  double relative_error = 0.0;
};
BetaDerivativeCheck beta_derivative_check(const AnnularDomain& domain, double beta, Resolution resolution);

// ---------------------------------------------------------------------------
// Theorem sweep and domain families

struct NamedDomain {
  std::string name;
  AnnularDomain domain;
};

/// Circles of radii R1 < R2 with the hole shifted by f (R2 - R1 - gap) along x, f in fractions.
std::vector<NamedDomain> eccentric_family(double r_inner, double r_outer, const std::vector<double>& fractions,
                                          double gap);
/// Ellipse (a, b) with a w x h rectangle hole scaled to make the domain class S.
NamedDomain ellipse_rectangle_member(double a, double b, double width, double height);
/// The built-in class-S members: concentric and eccentric annuli plus two ellipse/rectangle domains.
std::vector<NamedDomain> standard_suite();

/// Convex polygon with 3..12 vertices on a random ellipse, inradius normalized to 1.
ConvexPolygon random_convex_polygon(std::uint64_t seed);

/// lambda_FEM(beta, Omega) <= lambda_radial(beta, A_{R1,R2}) + tolerance for each member.
std::vector<InequalityReport> main_theorem_sweep(const std::vector<NamedDomain>& family, double beta,
                                                 Resolution resolution, int threads = 1);

struct StructureReport {
  double r_bar = 0.0;
  double argmax_radius = 0.0;
  double cell_size = 0.0;
  int critical_points = 0;
};
/// FEM argmax radius on the concentric annulus and critical points of the radial profile.
StructureReport eigenfunction_structure(double r_inner, double r_outer, double beta, Resolution resolution);

}  // namespace annulus
