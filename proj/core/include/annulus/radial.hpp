#pragma once

// First Robin-Dirichlet eigenvalue of the Laplacian on a spherical shell,
// reduced to the radial Sturm-Liouville problem
//
//   -(r^{n-1} phi')' = lambda r^{n-1} phi   on (R1, R2),
//   phi(R1) = 0,   phi'(R2) + beta phi(R2) = 0,
//
// with beta = +infinity meaning a Dirichlet condition at R2 and beta = 0 a
// Neumann condition.

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"

namespace annulus {

inline constexpr double kInfiniteBeta = std::numeric_limits<double>::infinity();

enum class RadialMethod { shooting, finite_difference, closed_form_3d };

std::string to_string(RadialMethod m);
RadialMethod parse_radial_method(const std::string& name);

struct ProfileSample {
  double r = 0.0;
  double phi = 0.0;
  double dphi = 0.0;
};

struct ShootOptions {
  double tolerance = 1e-12;  // local absolute and relative tolerance of the integrator
};

struct RadialSolveOptions {
  RadialMethod method = RadialMethod::shooting;
  double relative_tolerance = 1e-11;  // eigenvalue root-finding
  double integrator_tolerance = 1e-12;
  /// Upper end of the bracketing scan, in units of (pi / (R2 - R1))^2.
  double lambda_max_factor = 1e4;
  int profile_points = 4001;
  int fd_points = 20000;  // only for the finite-difference method
};

/// Eigenpair of the radial problem. The profile is normalized by phi'(R1) = 1
/// and evaluated between samples by cubic Hermite interpolation.
class RadialEigenResult {
 public:
  ShellSpec shell;
  double beta = 0.0;
  double lambda = 0.0;
  std::vector<ProfileSample> profile;
  double r_bar = 0.0;  // maximum point of phi (R2 when beta = 0)
  double v_m = 0.0;    // phi(R2)
  double v_M = 0.0;    // phi(r_bar)
  RadialMethod method = RadialMethod::shooting;
  double robin_residual = 0.0;  // |phi'(R2) + beta phi(R2)| (|phi(R2)| for beta = inf)

  double phi(double r) const;
  double dphi(double r) const;
  /// phi'' from the ODE: -lambda phi - (n-1) phi' / r.
  double ddphi(double r) const;

  /// Checks the documented invariants on the sample grid; returns a message on failure.
  std::optional<std::string> check_invariants(double residual_tol = 1e-8) const;
};

/// F(lambda) = phi'(R2) + beta phi(R2) (phi(R2) when beta = inf) for the
/// solution with phi(R1) = 0, phi'(R1) = 1.
double shoot(const ShellSpec& shell, double beta, double lambda_trial, ShootOptions options = {});

/// Smallest eigenvalue and its positive profile.
RadialEigenResult solve_shell(const ShellSpec& shell, double beta, RadialSolveOptions options = {});

/// n = 3 only: lambda = k^2 with k the smallest positive root of
/// k R2 cos(k d) + (beta R2 - 1) sin(k d) = 0, d = R2 - R1.
double closed_form_3d(double r_inner, double r_outer, double beta);

/// Second-order finite-volume discretization on `points` uniform intervals;
/// smallest eigenvalue of the symmetric tridiagonal pencil by Sturm bisection.
double solve_shell_fd(const ShellSpec& shell, double beta, int points);

struct LevelRadii {
  double inner = 0.0;                // r_i(t) in [R1, r_bar]
  std::optional<double> outer;       // r_o(t) in [r_bar, R2], present iff t >= v_m
};
LevelRadii level_radii(const RadialEigenResult& res, double t);

/// The one-dimensional profiles used by the web-function construction.
class WebProfiles {
 public:
  explicit WebProfiles(RadialEigenResult radial);

  const RadialEigenResult& radial() const noexcept { return radial_; }
  double inner_width() const noexcept { return radial_.r_bar - radial_.shell.r_inner; }
  double outer_width() const noexcept { return radial_.shell.r_outer - radial_.r_bar; }

  /// |Dv| on the level set {v = tau} inside A_{R1, r_bar}; tau in [0, v_M].
  double g_inner(double tau) const;
  /// |Dv| on the level set {v = tau} inside A_{r_bar, R2}; tau in [v_m, v_M].
  double g_outer(double tau) const;
  /// G_i(s) = phi(R1 + s), s in [0, r_bar - R1].
  double G_inner(double s) const;
  /// G_o(s) = phi(R2 - s), s in [0, R2 - r_bar].
  double G_outer(double s) const;
  double G_inner_derivative(double s) const;
  double G_outer_derivative(double s) const;
  double G_inner_inverse(double t) const;
  double G_outer_inverse(double t) const;

 private:
  RadialEigenResult radial_;
};

struct MonotonicityReport {
  std::vector<double> radii_outer;    // r for lambda(A_{R1, r})
  std::vector<double> lambda_outer;   // must strictly decrease
  std::vector<double> radii_inner;    // r for lambda(A_{r, R2})
  std::vector<double> lambda_inner;   // must strictly increase
  int violations = 0;
};
/// Tabulates lambda over k outer radii in (R1, R2] and k inner radii in [R1, R2).
MonotonicityReport radii_monotonicity(int n, double beta, double r_inner, double r_outer, int k);

}  // namespace annulus
