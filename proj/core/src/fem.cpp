#include "annulus/fem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "annulus/errors.hpp"

namespace annulus {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

const Vec2& node_at(const Mesh& m, int i) { return m.nodes[static_cast<std::size_t>(i)]; }

// Appends element contributions restricted to free nodes.
void scatter(std::vector<Triplet>& out, const std::array<int, 3>& idx, const Mat3& e) {
  for (int r = 0; r < 3; ++r) {
    const int i = idx[static_cast<std::size_t>(r)];
    if (i < 0) continue;
    for (int c = r; c < 3; ++c) {
      const int j = idx[static_cast<std::size_t>(c)];
      if (j < 0) continue;
      out.push_back({i, j, e[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]});
    }
  }
}

void scatter_edge(std::vector<Triplet>& out, int i, int j, double length) {
  const double d = length / 3.0;
  const double o = length / 6.0;
  if (i >= 0) out.push_back({i, i, d});
  if (j >= 0) out.push_back({j, j, d});
  if (i >= 0 && j >= 0) out.push_back({i, j, o});
}

double inverse_mass_norm(const SparseSymmetric& m, const IncompleteCholesky& pm, std::span<const double> r) {
  std::vector<double> z(r.size(), 0.0);
  conjugate_gradient(m, r, z, pm, 1e-8, 500);
  return std::sqrt(std::max(0.0, dot(r, z)));
}

}  // namespace

Mat3 element_stiffness(Vec2 a, Vec2 b, Vec2 c) {
  const double area2 = cross(b - a, c - a);
  if (!(area2 > 0.0)) throw InvalidGeometry("element is degenerate or inverted");
  // Gradients of barycentric coordinates are rot(opposite edge) / (2 area).
  const std::array<Vec2, 3> e{c - b, a - c, b - a};
  Mat3 k{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) k[i][j] = dot(e[i], e[j]) / (2.0 * area2);
  }
  return k;
}

Mat3 element_mass(Vec2 a, Vec2 b, Vec2 c) {
  const double area = 0.5 * cross(b - a, c - a);
  Mat3 m{};
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) m[i][j] = area / (i == j ? 6.0 : 12.0);
  }
  return m;
}

std::vector<double> FemSystem::expand(std::span<const double> free) const {
  std::vector<double> full(free_map.size(), 0.0);
  for (std::size_t k = 0; k < free_nodes.size(); ++k) full[static_cast<std::size_t>(free_nodes[k])] = free[k];
  return full;
}

std::vector<double> FemSystem::restrict_to_free(std::span<const double> full) const {
  std::vector<double> free(free_nodes.size());
  for (std::size_t k = 0; k < free_nodes.size(); ++k) free[k] = full[static_cast<std::size_t>(free_nodes[k])];
  return free;
}

FullMatrices assemble_full(const Mesh& mesh) {
  std::vector<Triplet> k;
  std::vector<Triplet> m;
  std::vector<Triplet> b;
  k.reserve(6 * mesh.triangles.size());
  m.reserve(6 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Vec2 p0 = node_at(mesh, t[0]);
    const Vec2 p1 = node_at(mesh, t[1]);
    const Vec2 p2 = node_at(mesh, t[2]);
    scatter(k, t, element_stiffness(p0, p1, p2));
    scatter(m, t, element_mass(p0, p1, p2));
  }
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag != Side::outer) continue;
    scatter_edge(b, e.a, e.b, norm(node_at(mesh, e.b) - node_at(mesh, e.a)));
  }
  const std::size_t n = mesh.node_count();
  return {SparseSymmetric::from_triplets(n, k), SparseSymmetric::from_triplets(n, b),
          SparseSymmetric::from_triplets(n, m)};
}

FemSystem assemble(const Mesh& mesh, double beta) {
  if (!(beta >= 0.0)) throw DomainError("beta must be nonnegative");
  const bool dirichlet_outer = std::isinf(beta);
  FemSystem sys;
  sys.beta = beta;
  sys.free_map.assign(mesh.node_count(), 0);
  for (const auto& e : mesh.boundary_edges) {
    if (e.tag == Side::inner || dirichlet_outer) {
      sys.free_map[static_cast<std::size_t>(e.a)] = -1;
      sys.free_map[static_cast<std::size_t>(e.b)] = -1;
    }
  }
  for (std::size_t i = 0; i < sys.free_map.size(); ++i) {
    if (sys.free_map[i] < 0) continue;
    sys.free_map[i] = static_cast<int>(sys.free_nodes.size());
    sys.free_nodes.push_back(static_cast<int>(i));
  }
  auto local = [&](const std::array<int, 3>& t) {
    return std::array<int, 3>{sys.free_map[static_cast<std::size_t>(t[0])],
                              sys.free_map[static_cast<std::size_t>(t[1])],
                              sys.free_map[static_cast<std::size_t>(t[2])]};
  };
  std::vector<Triplet> k;
  std::vector<Triplet> m;
  std::vector<Triplet> b;
  k.reserve(6 * mesh.triangles.size());
  m.reserve(6 * mesh.triangles.size());
  for (const auto& t : mesh.triangles) {
    const Vec2 p0 = node_at(mesh, t[0]);
    const Vec2 p1 = node_at(mesh, t[1]);
    const Vec2 p2 = node_at(mesh, t[2]);
    const auto idx = local(t);
    scatter(k, idx, element_stiffness(p0, p1, p2));
    scatter(m, idx, element_mass(p0, p1, p2));
  }
  if (!dirichlet_outer) {
    for (const auto& e : mesh.boundary_edges) {
      if (e.tag != Side::outer) continue;
      scatter_edge(b, sys.free_map[static_cast<std::size_t>(e.a)], sys.free_map[static_cast<std::size_t>(e.b)],
                   norm(node_at(mesh, e.b) - node_at(mesh, e.a)));
    }
  }
  const std::size_t n = sys.free_nodes.size();
  sys.stiffness = SparseSymmetric::from_triplets(n, k);
  sys.mass = SparseSymmetric::from_triplets(n, m);
  sys.boundary_mass = SparseSymmetric::from_triplets(n, b);
  sys.operator_a = dirichlet_outer || beta == 0.0
                       ? sys.stiffness
                       : SparseSymmetric::combine(1.0, sys.stiffness, beta, sys.boundary_mass);
  return sys;
}

EigenPair smallest_eigenpair(const SparseSymmetric& a, const SparseSymmetric& m, const EigenOptions& options) {
  const std::size_t n = a.size();
  if (n == 0 || m.size() != n) throw RangeError("eigenproblem has no free unknowns or mismatched sizes");
  const IncompleteCholesky mass_precond(m);

  std::vector<double> x(n, 1.0);
  std::vector<double> mx(n);
  std::vector<double> ax(n);
  std::vector<double> y(n);
  std::vector<double> r(n);

  auto normalize = [&](std::vector<double>& v) {
    m.multiply(v, mx);
    const double s = std::sqrt(dot(v, mx));
    if (!(s > 0.0) || !std::isfinite(s)) throw NumericalFailure("inverse iteration produced a null vector");
    for (double& vi : v) vi /= s;
    for (double& vi : mx) vi /= s;
  };
  normalize(x);
  a.multiply(x, ax);
  double rho = dot(x, ax);

  EigenPair out;
  double sigma = 0.0;
  SparseSymmetric shifted = a;
  auto precond = std::make_unique<IncompleteCholesky>(shifted);
  double residual = std::numeric_limits<double>::infinity();

  for (int it = 1; it <= options.max_iterations; ++it) {
    // Warm start: for x near the eigenvector, (A - sigma M)^{-1} M x ~ x / (rho - sigma).
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] / (rho - sigma);
    CgResult cg = conjugate_gradient(shifted, mx, y, *precond, options.cg_tolerance, options.cg_max_iterations);
    out.stats.cg_iterations += cg.iterations;
    if (!cg.converged) {
      if (sigma > 0.0) {
        // The shift may have overshot; fall back to the unshifted pencil.
        sigma = 0.0;
        shifted = a;
        precond = std::make_unique<IncompleteCholesky>(shifted);
        continue;
      }
      throw SolverError("conjugate gradients did not converge in the inverse iteration", cg.residual);
    }
    if (dot(y, mx) < 0.0) {
      throw SolverError("shifted inverse iteration lost positive definiteness", cg.residual);
    }
    x.swap(y);
    normalize(x);
    a.multiply(x, ax);
    const double rho_new = dot(x, ax);
    for (std::size_t i = 0; i < n; ++i) r[i] = ax[i] - rho_new * mx[i];
    residual = norm2(r) / norm2(x);
    const double change = std::abs(rho_new - rho) / std::abs(rho_new);
    rho = rho_new;
    out.stats.iterations = it;
    if (change < options.rayleigh_tolerance && residual <= options.residual_tolerance) break;
    if (it == options.max_iterations) {
      throw SolverError("inverse iteration reached its iteration cap", residual);
    }
    // Weinstein: some eigenvalue lies within ||r||_{M^-1} of rho; staying 2x below
    // it (and never closer than 10% of rho) keeps A - sigma M definite.
    const double eps = inverse_mass_norm(m, mass_precond, r);
    const double candidate = rho - std::max(2.0 * eps, 0.1 * rho);
    if (candidate > sigma + 0.25 * (rho - sigma)) {
      sigma = candidate;
      shifted = SparseSymmetric::combine(1.0, a, -sigma, m);
      precond = std::make_unique<IncompleteCholesky>(shifted);
    }
  }
  double sum = std::accumulate(x.begin(), x.end(), 0.0);
  if (sum < 0.0) {
    for (double& xi : x) xi = -xi;
  }
  out.lambda = rho;
  out.vector = std::move(x);
  out.stats.residual = residual;
  out.stats.shift = sigma;
  return out;
}

double FemEigenResult::min_value() const {
  return u_h.empty() ? 0.0 : *std::min_element(u_h.begin(), u_h.end());
}

std::size_t FemEigenResult::argmax() const {
  return static_cast<std::size_t>(std::max_element(u_h.begin(), u_h.end()) - u_h.begin());
}

FemEigenResult solve_mesh(const Mesh& mesh, double beta, const EigenOptions& options) {
  const FemSystem sys = assemble(mesh, beta);
  EigenPair pair = smallest_eigenpair(sys.operator_a, sys.mass, options);
  FemEigenResult res;
  res.beta = beta;
  res.lambda_h = pair.lambda;
  res.stats = pair.stats;
  res.beta_derivative = std::isinf(beta) ? 0.0 : sys.boundary_mass.bilinear(pair.vector, pair.vector);
  res.u_h = sys.expand(pair.vector);
  res.mesh = mesh;
  // P1 on non-acute triangles has no discrete maximum principle, so tiny
  // negative entries are legitimate; a real sign change is not.
  if (res.min_value() < -1e-3 * res.u_h[res.argmax()]) {
    throw NumericalFailure("computed eigenvector changes sign; not the first eigenfunction");
  }
  return res;
}

FemEigenResult solve_domain(const AnnularDomain& domain, double beta, int n_radial, int n_angular,
                            const EigenOptions& options) {
  return solve_mesh(mesh_annular(domain, n_radial, n_angular), beta, options);
}

RichardsonEstimate richardson(double lambda_fine, double lambda_coarse) {
  const double diff = lambda_fine - lambda_coarse;
  return {lambda_fine + diff / 3.0, std::abs(diff) / 3.0};
}

ConvergenceStudy convergence_study(const AnnularDomain& domain, double beta,
                                   const std::vector<Resolution>& resolutions, std::optional<double> reference,
                                   const EigenOptions& options) {
  if (resolutions.size() < 3) throw RangeError("convergence study needs at least three resolutions");
  ConvergenceStudy study;
  for (const Resolution& res : resolutions) {
    const Mesh mesh = mesh_annular(domain, res.n_radial, res.n_angular);
    const FemEigenResult r = solve_mesh(mesh, beta, options);
    study.rows.push_back({res, mesh.max_edge_length(), r.lambda_h, 0.0});
  }
  std::size_t fit_count = study.rows.size();
  if (reference) {
    study.lambda_ref = *reference;
    study.reference_is_exact = true;
  } else {
    const auto& fine = study.rows[study.rows.size() - 1];
    const auto& coarse = study.rows[study.rows.size() - 2];
    study.lambda_ref = richardson(fine.lambda_h, coarse.lambda_h).reference;
    fit_count -= 1;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < study.rows.size(); ++i) {
    auto& row = study.rows[i];
    row.error = std::abs(row.lambda_h - study.lambda_ref);
    if (i >= fit_count) continue;
    const double lx = std::log(row.h);
    const double ly = std::log(std::max(row.error, std::numeric_limits<double>::min()));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(fit_count);
  study.order = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return study;
}

}  // namespace annulus
