#pragma once

#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/radial.hpp"

namespace annulus {

struct WebOptions {
  /// Interface jump accepted as continuous, in units of v_M.
  double continuity_tolerance = 1e-3;
  /// Rays used to sample the interface {d_i = s*}.
  int interface_samples = 4096;
  /// Angular panels of the quadrature used by the area bisection.
  int area_panels = 4096;
};

/// The web test function built from the matching shell's radial profile:
/// w = G_o(d_o) (or v_M) on M_o and G_i(d_i) (or v_M) on M_i = {d_i < s*}.
class WebFunction {
 public:
  /// `radial` must be the two-dimensional eigenprofile of the shell matching
  /// `domain` (same R1, R2). Throws Infeasible for domains outside class S.
  WebFunction(AnnularDomain domain, RadialEigenResult radial, WebOptions options = {});

  const AnnularDomain& domain() const noexcept { return domain_; }
  const WebProfiles& profiles() const noexcept { return profiles_; }
  const RadialEigenResult& radial() const noexcept { return profiles_.radial(); }
  const WebOptions& options() const noexcept { return options_; }

  double s_star() const noexcept { return s_star_; }
  /// |M_i| from the same quadrature as the bisection.
  double inner_area() const noexcept { return inner_area_; }
  double target_area() const noexcept { return target_area_; }
  double interface_jump() const noexcept { return interface_jump_; }
  double continuity_tolerance() const noexcept { return options_.continuity_tolerance * radial().v_M; }
  bool continuous() const noexcept { return interface_jump_ <= continuity_tolerance(); }
  /// Whether part of the outer boundary lies in M_i (then w differs from v_m there).
  bool outer_boundary_meets_inner_part() const noexcept { return outer_touches_mi_; }

  double value(Vec2 x) const;
  /// |grad w| away from the interface (zero on the plateaus).
  double gradient_norm(Vec2 x) const;

 private:
  AnnularDomain domain_;
  WebProfiles profiles_;
  WebOptions options_;
  double s_star_ = 0.0;
  double inner_area_ = 0.0;
  double target_area_ = 0.0;
  double interface_jump_ = 0.0;
  bool outer_touches_mi_ = false;
};

/// Threshold s* with |{x in Omega : d_i(x) < s*}| = |A_{R1, r_bar}|.
double find_split(const AnnularDomain& domain, const RadialEigenResult& radial, int panels = 4096);

/// Area of {x in Omega : d_i(x) < s} by polar quadrature about the domain center.
double inner_sublevel_area(const AnnularDomain& domain, double s, int panels = 4096);

/// w(x); throws DomainError outside the closed domain.
double evaluate_w(const WebFunction& web, Vec2 x);

struct RayleighParts {
  double gradient = 0.0;  // int |grad w|^2
  double boundary = 0.0;  // beta int_{outer} w^2
  double mass = 0.0;      // int w^2
  double area = 0.0;      // int 1, a quadrature self-check against |Omega|
  double value = 0.0;     // (gradient + boundary) / mass
  int quad_level = 0;
};

/// Rayleigh quotient of w by iterated Gauss quadrature in polar coordinates
/// about the domain center; each ray is split where the definition of w
/// switches. Throws NumericalFailure for an uncertified web unless
/// `allow_discontinuous` is set.
RayleighParts rayleigh_quotient(const WebFunction& web, double beta, int quad_level,
                                bool allow_discontinuous = false, int threads = 1);

struct ComparisonRow {
  double t = 0.0;
  double mu_o = 0.0;
  double eta_o = 0.0;
  double mu_i = 0.0;
  double eta_i = 0.0;
  double perimeter_e_o = 0.0;  // P(E_t^o)
  double perimeter_f_o = 0.0;  // P(F_t^o)
};

struct ComparisonCurves {
  std::vector<ComparisonRow> rows;
  double tolerance = 0.0;
  /// Largest violations: max(eta_o - mu_o), max(mu_i - eta_i), max(P(E) - P(F)).
  double outer_measure_violation = 0.0;
  double inner_measure_violation = 0.0;
  double perimeter_violation = 0.0;
  bool pass() const noexcept {
    return outer_measure_violation <= tolerance && inner_measure_violation <= tolerance &&
           perimeter_violation <= tolerance;
  }
};

/// Level-set measures on t_k = v_M k / n_levels, k = 0 .. n_levels - 1.
ComparisonCurves comparison_curves(const WebFunction& web, int n_levels);

}  // namespace annulus
