#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/mesh.hpp"
#include "annulus/sparse.hpp"

namespace annulus {

/// Element matrices of a P1 triangle.
std::array<std::array<double, 3>, 3> element_stiffness(Vec2 a, Vec2 b, Vec2 c);
std::array<std::array<double, 3>, 3> element_mass(Vec2 a, Vec2 b, Vec2 c);

/// Reduced system on the free nodes. The inner boundary is always eliminated;
/// the outer boundary is eliminated too when beta is infinite.
struct FemSystem {
  double beta = 0.0;
  SparseSymmetric stiffness;      // K
  SparseSymmetric boundary_mass;  // B (outer edges); empty pattern when beta = inf
  SparseSymmetric mass;           // M (consistent)
  SparseSymmetric operator_a;     // K + beta B
  std::vector<int> free_map;      // node -> free index, -1 if eliminated
  std::vector<int> free_nodes;    // free index -> node

  std::size_t free_count() const noexcept { return free_nodes.size(); }
  /// Scatters a free vector back to all nodes (eliminated nodes get 0).
  std::vector<double> expand(std::span<const double> free) const;
  std::vector<double> restrict_to_free(std::span<const double> full) const;
};

/// Assembles K, M and the exact outer edge mass B on the whole mesh, without
/// elimination (used by tests and by shape-derivative flux recovery).
struct FullMatrices {
  SparseSymmetric stiffness;
  SparseSymmetric boundary_mass;
  SparseSymmetric mass;
};
FullMatrices assemble_full(const Mesh& mesh);

FemSystem assemble(const Mesh& mesh, double beta);

struct EigenOptions {
  double rayleigh_tolerance = 1e-12;  // relative change of the Rayleigh quotient
  double residual_tolerance = 1e-10;  // ||A u - lambda M u|| <= tol ||u||
  double cg_tolerance = 1e-13;
  int cg_max_iterations = 20000;
  int max_iterations = 500;
};

struct SolverStats {
  int iterations = 0;     // outer inverse iterations
  int cg_iterations = 0;  // total inner iterations
  double residual = 0.0;  // ||A u - lambda M u|| / ||u||
  double shift = 0.0;     // final spectral shift
};

struct EigenPair {
  double lambda = 0.0;
  std::vector<double> vector;  // M-normalized, positive sum
  SolverStats stats;
};

/// Smallest eigenpair of the SPD pencil (A, M) by shifted inverse iteration.
/// The shift is kept below the smallest eigenvalue using the Weinstein bound of
/// the current iterate, so every inner system stays positive definite.
EigenPair smallest_eigenpair(const SparseSymmetric& a, const SparseSymmetric& m,
                             const EigenOptions& options = {});

struct FemEigenResult {
  double lambda_h = 0.0;
  std::vector<double> u_h;  // all nodes, unit L2 norm, positive sum
  Mesh mesh;
  SolverStats stats;
  double beta = 0.0;
  /// u^T B u / u^T M u, the derivative of lambda_h with respect to beta.
  double beta_derivative = 0.0;

  double min_value() const;
  std::size_t argmax() const;
};

/// Throws NumericalFailure when min u_h < -1e-3 max u_h (not the first eigenfunction).
FemEigenResult solve_mesh(const Mesh& mesh, double beta, const EigenOptions& options = {});
FemEigenResult solve_domain(const AnnularDomain& domain, double beta, int n_radial, int n_angular,
                            const EigenOptions& options = {});

/// Order-2 Richardson extrapolation from two consecutive levels (h and 2h).
struct RichardsonEstimate {
  double reference = 0.0;
  double error = 0.0;  // |lambda_h - lambda_2h| / 3
};
RichardsonEstimate richardson(double lambda_fine, double lambda_coarse);

struct Resolution {
  int n_radial = 0;
  int n_angular = 0;
};

struct ConvergenceRow {
  Resolution resolution;
  double h = 0.0;  // maximum edge length
  double lambda_h = 0.0;
  double error = 0.0;  // |lambda_h - lambda_ref|
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double lambda_ref = 0.0;
  bool reference_is_exact = false;
  double order = 0.0;  // least-squares slope of log error vs log h
};

/// With `reference` given (e.g. the radial solver on a shell) it is used as
/// lambda_ref; otherwise the two finest levels are Richardson-extrapolated and
/// the finest level is excluded from the fit.
ConvergenceStudy convergence_study(const AnnularDomain& domain, double beta,
                                   const std::vector<Resolution>& resolutions,
                                   std::optional<double> reference = std::nullopt,
                                   const EigenOptions& options = {});

}  // namespace annulus
