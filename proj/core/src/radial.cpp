#include "annulus/radial.hpp"

#include <algorithm>
#include <array>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "annulus/errors.hpp"

namespace annulus {

namespace odeint = boost::numeric::odeint;

namespace {

constexpr double kPi = std::numbers::pi;
using State = std::array<double, 2>;

struct RadialOde {
  double lambda;
  double n_minus_1;
  void operator()(const State& y, State& dy, double r) const {
    dy[0] = y[1];
    dy[1] = -lambda * y[0] - n_minus_1 * y[1] / r;
  }
};

void check_beta(double beta) {
  if (std::isnan(beta) || beta < 0.0) throw RangeError("Robin parameter must be >= 0 (or inf)");
}

// Fills r_bar, v_m, v_M and the Robin residual from the sampled profile.
void finalize_profile(RadialEigenResult& res) {
  const auto& p = res.profile;
  const double r1 = res.shell.r_inner;
  const double r2 = res.shell.r_outer;
  const ProfileSample& last = p.back();
  res.v_m = std::isinf(res.beta) ? 0.0 : last.phi;
  res.robin_residual =
      std::isinf(res.beta) ? std::abs(last.phi) : std::abs(last.dphi + res.beta * last.phi);

  for (std::size_t j = 1; j + 1 < p.size(); ++j) {
    if (!(p[j].phi > 0.0)) {
      throw NumericalFailure("radial profile changes sign: not the first eigenfunction");
    }
  }
  if (res.beta == 0.0) {
    res.r_bar = r2;
    res.v_M = last.phi;
    return;
  }
  std::size_t j = 0;
  while (j + 1 < p.size() && p[j + 1].dphi > 0.0) ++j;
  if (j + 1 >= p.size()) {
    res.r_bar = r2;
    res.v_M = last.phi;
    return;
  }
  double lo = p[j].r;
  double hi = p[j + 1].r;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * r2; ++it) {
    const double mid = 0.5 * (lo + hi);
    (res.dphi(mid) > 0.0 ? lo : hi) = mid;
  }
  res.r_bar = std::clamp(0.5 * (lo + hi), r1, r2);
  res.v_M = res.phi(res.r_bar);
}

// Sturm count of eigenvalues of the symmetric tridiagonal (d, e) below x.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  int count = 0;
  double q = 1.0;
  const double tiny = 1e-300;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double off = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
    q = d[i] - x - (i == 0 ? 0.0 : off / q);
    if (q == 0.0) q = -tiny;
    if (q < 0.0) ++count;
  }
  return count;
}

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> off;
  std::vector<double> mass;  // lumped weights, T = M^{-1/2} A M^{-1/2}
  double h = 0.0;
};

Tridiagonal assemble_fd(const ShellSpec& shell, double beta, int m) {
  const double r1 = shell.r_inner;
  const double h = shell.width() / m;
  const double p = shell.dim - 1.0;
  const bool dirichlet_outer = std::isinf(beta);
  const int unknowns = dirichlet_outer ? m - 1 : m;  // nodes 1..unknowns
  std::vector<double> a_diag(static_cast<std::size_t>(unknowns), 0.0);
  std::vector<double> a_off(static_cast<std::size_t>(std::max(0, unknowns - 1)), 0.0);
  std::vector<double> mass(static_cast<std::size_t>(unknowns), 0.0);
  for (int j = 0; j < m; ++j) {
    const double w = std::pow(r1 + (j + 0.5) * h, p) / h;
    // interval [j, j+1]; local node index k = j - 1
    if (j >= 1 && j <= unknowns) a_diag[static_cast<std::size_t>(j - 1)] += w;
    if (j + 1 <= unknowns) a_diag[static_cast<std::size_t>(j)] += w;
    if (j >= 1 && j + 1 <= unknowns) a_off[static_cast<std::size_t>(j - 1)] -= w;
  }
  for (int k = 1; k <= unknowns; ++k) {
    const double rk = r1 + k * h;
    mass[static_cast<std::size_t>(k - 1)] = (k == m ? 0.5 : 1.0) * h * std::pow(rk, p);
  }
  if (!dirichlet_outer) a_diag.back() += beta * std::pow(shell.r_outer, p);

  Tridiagonal t;
  t.h = h;
  t.mass = mass;
  t.diag.resize(a_diag.size());
  t.off.resize(a_off.size());
  for (std::size_t i = 0; i < a_diag.size(); ++i) t.diag[i] = a_diag[i] / mass[i];
  for (std::size_t i = 0; i < a_off.size(); ++i) {
    t.off[i] = a_off[i] / std::sqrt(mass[i] * mass[i + 1]);
  }
  return t;
}

double smallest_eigenvalue(const Tridiagonal& t) {
  double hi = 0.0;
  for (std::size_t i = 0; i < t.diag.size(); ++i) {
    const double left = i > 0 ? std::abs(t.off[i - 1]) : 0.0;
    const double right = i < t.off.size() ? std::abs(t.off[i]) : 0.0;
    hi = std::max(hi, t.diag[i] + left + right);
  }
  double lo = 0.0;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sturm_count(t.diag, t.off, mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenvector of T for the eigenvalue closest to `shift` by inverse iteration (Thomas solves).
std::vector<double> tridiagonal_eigenvector(const Tridiagonal& t, double shift) {
  const std::size_t n = t.diag.size();
  std::vector<double> x(n, 1.0);
  std::vector<double> c(n), y(n);
  for (int sweep = 0; sweep < 4; ++sweep) {
    // forward elimination
    double denom = t.diag[0] - shift;
    if (denom == 0.0) denom = 1e-300;
    c[0] = n > 1 ? t.off[0] / denom : 0.0;
    y[0] = x[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = t.diag[i] - shift - t.off[i - 1] * c[i - 1];
      if (denom == 0.0) denom = 1e-300;
      c[i] = i + 1 < n ? t.off[i] / denom : 0.0;
      y[i] = (x[i] - t.off[i - 1] * y[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) y[i] -= c[i] * y[i + 1];
    double nrm = 0.0;
    for (double v : y) nrm = std::max(nrm, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / nrm;
  }
  return x;
}

}  // namespace

std::string to_string(RadialMethod m) {
  switch (m) {
    case RadialMethod::shooting:
      return "shooting";
    case RadialMethod::finite_difference:
      return "fd";
    case RadialMethod::closed_form_3d:
      return "closed3d";
  }
  return "unknown";
}

RadialMethod parse_radial_method(const std::string& name) {
  if (name == "shooting") return RadialMethod::shooting;
  if (name == "fd" || name == "finite-difference") return RadialMethod::finite_difference;
  if (name == "closed3d" || name == "closed-form-3d") return RadialMethod::closed_form_3d;
  throw RangeError("unknown radial method '" + name + "'");
}

// ---------------------------------------------------------------------------
// RadialEigenResult

namespace {

struct Cell {
  std::size_t j;
  double t;
  double h;
};

Cell locate(const std::vector<ProfileSample>& p, double r) {
  const double r0 = p.front().r;
  const double r1 = p.back().r;
  const double slack = 1e-12 * r1;
  if (r < r0 - slack || r > r1 + slack) throw RangeError("radius outside the shell");
  const double h = (r1 - r0) / static_cast<double>(p.size() - 1);
  const double x = std::clamp((r - r0) / h, 0.0, static_cast<double>(p.size() - 1));
  std::size_t j = std::min(static_cast<std::size_t>(x), p.size() - 2);
  return {j, x - static_cast<double>(j), h};
}

double hermite(double f0, double d0, double f1, double d1, double t, double h) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
         (t3 - t2) * h * d1;
}

}  // namespace

double RadialEigenResult::phi(double r) const {
  const Cell c = locate(profile, r);
  const auto& a = profile[c.j];
  const auto& b = profile[c.j + 1];
  return hermite(a.phi, a.dphi, b.phi, b.dphi, c.t, c.h);
}

double RadialEigenResult::ddphi(double r) const {
  return -lambda * phi(r) - (shell.dim - 1.0) * dphi(r) / r;
}

double RadialEigenResult::dphi(double r) const {
  const Cell c = locate(profile, r);
  const auto& a = profile[c.j];
  const auto& b = profile[c.j + 1];
  const double p = shell.dim - 1.0;
  const double da = -lambda * a.phi - p * a.dphi / a.r;
  const double db = -lambda * b.phi - p * b.dphi / b.r;
  return hermite(a.dphi, da, b.dphi, db, c.t, c.h);
}

std::optional<std::string> RadialEigenResult::check_invariants(double residual_tol) const {
  std::ostringstream msg;
  const double r1 = shell.r_inner;
  const double r2 = shell.r_outer;
  if (!(lambda > 0.0)) return "lambda is not positive";
  if (std::abs(profile.front().phi) > 1e-14) return "phi(R1) != 0";
  if (beta > 0.0 && !(r1 < r_bar && r_bar < r2)) return "critical radius outside (R1, R2)";
  if (std::isfinite(beta) && beta > 0.0 && !(0.0 < v_m && v_m < v_M)) return "0 < v_m < v_M violated";
  int sign_changes = 0;
  for (std::size_t j = 1; j < profile.size(); ++j) {
    if (j + 1 < profile.size() && !(profile[j].phi > 0.0)) return "phi not positive";
    if ((profile[j].dphi > 0.0) != (profile[j - 1].dphi > 0.0)) ++sign_changes;
  }
  if (beta > 0.0 && sign_changes != 1) {
    msg << "phi' changes sign " << sign_changes << " times";
    return msg.str();
  }
  const double scale = std::isinf(beta) ? std::abs(profile.back().dphi)
                                        : std::max(std::abs(profile.back().dphi), beta * v_m);
  if (robin_residual > residual_tol * std::max(scale, 1e-300)) return "Robin residual too large";
  return std::nullopt;
}

// ---------------------------------------------------------------------------

double shoot(const ShellSpec& shell, double beta, double lambda_trial, ShootOptions options) {
  shell.validate();
  check_beta(beta);
  if (lambda_trial < 0.0) throw RangeError("trial eigenvalue must be >= 0");
  State y{0.0, 1.0};
  const RadialOde ode{lambda_trial, shell.dim - 1.0};
  auto stepper = odeint::make_controlled(options.tolerance, options.tolerance,
                                         odeint::runge_kutta_dopri5<State>());
  const double dt0 = 1e-3 * shell.width();
  try {
    odeint::integrate_adaptive(stepper, ode, y, shell.r_inner, shell.r_outer, dt0);
  } catch (const std::exception& e) {
    throw NumericalFailure(std::string("radial integration failed: ") + e.what());
  }
  if (!std::isfinite(y[0]) || !std::isfinite(y[1])) throw NumericalFailure("radial integration diverged");
  return std::isinf(beta) ? y[0] : y[1] + beta * y[0];
}

namespace {

std::vector<ProfileSample> integrate_profile(const ShellSpec& shell, double lambda, int points,
                                             double tolerance) {
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int j = 0; j < points; ++j) {
    grid[static_cast<std::size_t>(j)] = shell.r_inner + shell.width() * j / (points - 1);
  }
  grid.back() = shell.r_outer;
  std::vector<ProfileSample> out;
  out.reserve(grid.size());
  State y{0.0, 1.0};
  auto stepper = odeint::make_dense_output(tolerance, tolerance, odeint::runge_kutta_dopri5<State>());
  try {
    odeint::integrate_times(
        stepper, RadialOde{lambda, shell.dim - 1.0}, y, grid.begin(), grid.end(),
        1e-3 * shell.width(),
        [&](const State& s, double r) { out.push_back({r, s[0], s[1]}); });
  } catch (const std::exception& e) {
    throw NumericalFailure(std::string("radial profile integration failed: ") + e.what());
  }
  return out;
}

RadialEigenResult solve_shooting(const ShellSpec& shell, double beta,
                                 const RadialSolveOptions& opt) {
  const double unit = (kPi / shell.width()) * (kPi / shell.width());
  const double step = unit / 16.0;
  const double lambda_max = opt.lambda_max_factor * unit;
  const ShootOptions so{opt.integrator_tolerance};
  auto F = [&](double lam) { return shoot(shell, beta, lam, so); };

  double lo = 0.0;
  double f_lo = F(lo);
  double hi = step;
  double f_hi = F(hi);
  while (f_hi > 0.0) {
    lo = hi;
    f_lo = f_hi;
    hi += step;
    if (hi > lambda_max) throw BracketFailure("no sign change of the shooting residual below lambda_max");
    f_hi = F(hi);
  }
  double lambda = hi;
  if (f_hi != 0.0) {
    const double rtol = opt.relative_tolerance;
    auto tol = [rtol](double a, double b) { return std::abs(b - a) <= rtol * std::abs(a); };
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::toms748_solve(F, lo, hi, f_lo, f_hi, tol, iters);
    lambda = 0.5 * (bracket.first + bracket.second);
  }

  RadialEigenResult res;
  res.shell = shell;
  res.beta = beta;
  res.lambda = lambda;
  res.method = RadialMethod::shooting;
  res.profile = integrate_profile(shell, lambda, opt.profile_points, opt.integrator_tolerance);
  finalize_profile(res);
  return res;
}

RadialEigenResult solve_closed(const ShellSpec& shell, double beta, const RadialSolveOptions& opt) {
  if (shell.dim != 3) throw RangeError("closed form is only available for n = 3");
  const double lambda = closed_form_3d(shell.r_inner, shell.r_outer, beta);
  const double k = std::sqrt(lambda);
  const double r1 = shell.r_inner;
  RadialEigenResult res;
  res.shell = shell;
  res.beta = beta;
  res.lambda = lambda;
  res.method = RadialMethod::closed_form_3d;
  const int n = opt.profile_points;
  res.profile.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double r = j + 1 == n ? shell.r_outer : r1 + shell.width() * j / (n - 1);
    const double s = std::sin(k * (r - r1));
    const double c = std::cos(k * (r - r1));
    // phi = (R1/k) sin(k(r - R1)) / r so that phi'(R1) = 1
    const double scale = r1 / k;
    res.profile.push_back({r, scale * s / r, scale * (k * c * r - s) / (r * r)});
  }
  finalize_profile(res);
  return res;
}

RadialEigenResult solve_fd(const ShellSpec& shell, double beta, const RadialSolveOptions& opt) {
  const int m = opt.fd_points;
  const Tridiagonal t = assemble_fd(shell, beta, m);
  const double lambda = smallest_eigenvalue(t);
  std::vector<double> v = tridiagonal_eigenvector(t, lambda * (1.0 - 1e-10));
  const std::size_t unknowns = v.size();
  std::vector<double> phi(static_cast<std::size_t>(m) + 1, 0.0);
  for (std::size_t i = 0; i < unknowns; ++i) phi[i + 1] = v[i] / std::sqrt(t.mass[i]);
  const double h = t.h;
  const std::size_t last = phi.size() - 1;
  std::vector<double> dphi(phi.size());
  dphi[0] = (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * h);
  for (std::size_t j = 1; j < last; ++j) dphi[j] = (phi[j + 1] - phi[j - 1]) / (2.0 * h);
  dphi[last] = (3.0 * phi[last] - 4.0 * phi[last - 1] + phi[last - 2]) / (2.0 * h);
  const double norm0 = dphi[0];
  if (norm0 == 0.0) throw NumericalFailure("degenerate finite-difference eigenvector");

  RadialEigenResult res;
  res.shell = shell;
  res.beta = beta;
  res.lambda = lambda;
  res.method = RadialMethod::finite_difference;
  res.profile.reserve(phi.size());
  for (std::size_t j = 0; j <= last; ++j) {
    const double r = j == last ? shell.r_outer : shell.r_inner + static_cast<double>(j) * h;
    res.profile.push_back({r, phi[j] / norm0, dphi[j] / norm0});
  }
  finalize_profile(res);
  return res;
}

}  // namespace

RadialEigenResult solve_shell(const ShellSpec& shell, double beta, RadialSolveOptions options) {
  shell.validate();
  check_beta(beta);
  if (options.profile_points < 3) throw RangeError("profile needs at least 3 points");
  switch (options.method) {
    case RadialMethod::shooting:
      return solve_shooting(shell, beta, options);
    case RadialMethod::finite_difference:
      if (options.fd_points < 100) throw RangeError("finite differences need at least 100 points");
      return solve_fd(shell, beta, options);
    case RadialMethod::closed_form_3d:
      return solve_closed(shell, beta, options);
  }
  throw RangeError("unknown radial method");
}

double closed_form_3d(double r_inner, double r_outer, double beta) {
  ShellSpec{3, r_inner, r_outer}.validate();
  check_beta(beta);
  const double d = r_outer - r_inner;
  if (std::isinf(beta)) return (kPi / d) * (kPi / d);
  auto f = [&](double k) {
    return k * r_outer * std::cos(k * d) + (beta * r_outer - 1.0) * std::sin(k * d);
  };
  // f > 0 near k = 0 and f(pi/d) = -pi R2 / d < 0.
  constexpr int kScan = 2000;
  const double kmax = kPi / d;
  double lo = 0.0;
  double hi = kmax;
  for (int j = 1; j <= kScan; ++j) {
    const double k = kmax * j / kScan;
    if (f(k) <= 0.0) {
      hi = k;
      lo = kmax * (j - 1) / kScan;
      break;
    }
  }
  if (lo == 0.0) lo = 1e-300;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  const double k = 0.5 * (lo + hi);
  return k * k;
}

double solve_shell_fd(const ShellSpec& shell, double beta, int points) {
  shell.validate();
  check_beta(beta);
  if (points < 100) throw RangeError("finite differences need at least 100 points");
  return smallest_eigenvalue(assemble_fd(shell, beta, points));
}

// ---------------------------------------------------------------------------

LevelRadii level_radii(const RadialEigenResult& res, double t) {
  const double slack = 1e-12 * std::max(res.v_M, 1e-300);
  if (t < -slack || t > res.v_M + slack) throw RangeError("level outside [0, v_M]");
  t = std::clamp(t, 0.0, res.v_M);
  const double r1 = res.shell.r_inner;
  const double r2 = res.shell.r_outer;
  LevelRadii out;
  auto bisect = [&](double lo, double hi, bool increasing) {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const bool below = res.phi(mid) < t;
      ((below == increasing) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  if (t == 0.0) {
    out.inner = r1;
  } else if (t == res.v_M) {
    out.inner = res.r_bar;
  } else {
    out.inner = bisect(r1, res.r_bar, true);
  }
  if (t >= res.v_m) {
    if (t == res.v_m) {
      out.outer = r2;
    } else if (t == res.v_M) {
      out.outer = res.r_bar;
    } else {
      out.outer = bisect(res.r_bar, r2, false);
    }
  }
  return out;
}

WebProfiles::WebProfiles(RadialEigenResult radial) : radial_(std::move(radial)) {}

double WebProfiles::g_inner(double tau) const { return radial_.dphi(level_radii(radial_, tau).inner); }

double WebProfiles::g_outer(double tau) const {
  if (tau < radial_.v_m * (1.0 - 1e-12)) throw RangeError("g_o is defined on [v_m, v_M]");
  const auto lr = level_radii(radial_, std::max(tau, radial_.v_m));
  return std::abs(radial_.dphi(*lr.outer));
}

double WebProfiles::G_inner(double s) const {
  const double w = inner_width();
  if (s < -1e-12 * w || s > w * (1.0 + 1e-12)) throw RangeError("G_i argument outside [0, R_bar - R1]");
  return radial_.phi(radial_.shell.r_inner + std::clamp(s, 0.0, w));
}

double WebProfiles::G_outer(double s) const {
  const double w = outer_width();
  if (s < -1e-12 * w || s > w * (1.0 + 1e-12) + 1e-300) {
    throw RangeError("G_o argument outside [0, R2 - R_bar]");
  }
  return radial_.phi(radial_.shell.r_outer - std::clamp(s, 0.0, w));
}

double WebProfiles::G_inner_derivative(double s) const {
  const double w = inner_width();
  return radial_.dphi(radial_.shell.r_inner + std::clamp(s, 0.0, w));
}

double WebProfiles::G_outer_derivative(double s) const {
  const double w = outer_width();
  return -radial_.dphi(radial_.shell.r_outer - std::clamp(s, 0.0, w));
}

double WebProfiles::G_inner_inverse(double t) const {
  return level_radii(radial_, t).inner - radial_.shell.r_inner;
}

double WebProfiles::G_outer_inverse(double t) const {
  const auto lr = level_radii(radial_, t);
  if (!lr.outer) throw RangeError("G_o inverse is defined on [v_m, v_M]");
  return radial_.shell.r_outer - *lr.outer;
}

MonotonicityReport radii_monotonicity(int n, double beta, double r_inner, double r_outer, int k) {
  if (k < 3) throw RangeError("monotonicity sweep needs k >= 3");
  ShellSpec{n, r_inner, r_outer}.validate();
  MonotonicityReport rep;
  const double d = r_outer - r_inner;
  for (int j = 1; j <= k; ++j) {
    const double r = r_inner + d * j / k;
    rep.radii_outer.push_back(r);
    rep.lambda_outer.push_back(solve_shell({n, r_inner, r}, beta).lambda);
  }
  for (int j = 0; j < k; ++j) {
    const double r = r_inner + d * j / k;
    rep.radii_inner.push_back(r);
    rep.lambda_inner.push_back(solve_shell({n, r, r_outer}, beta).lambda);
  }
  for (int j = 1; j < k; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    if (!(rep.lambda_outer[jj] < rep.lambda_outer[jj - 1])) ++rep.violations;
    if (!(rep.lambda_inner[jj] > rep.lambda_inner[jj - 1])) ++rep.violations;
  }
  return rep;
}

}  // namespace annulus
