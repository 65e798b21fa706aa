#pragma once

// Compressed sparse row storage for symmetric matrices, a zero-fill incomplete
// Cholesky preconditioner and preconditioned conjugate gradients.

#include <cstddef>
#include <span>
#include <vector>

namespace annulus {

struct Triplet {
  int row = 0;
  int col = 0;
  double value = 0.0;
};

/// Symmetric matrix stored with both triangles in CSR form. Symmetry is exact:
/// every off-diagonal contribution is inserted at (i, j) and (j, i) at once.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  /// Builds from contributions; (i, j) and (j, i) are treated as the same entry
  /// and duplicates are summed in input order.
  static SparseSymmetric from_triplets(std::size_t n, std::span<const Triplet> entries);
  static SparseSymmetric identity(std::size_t n);
  /// a * A + b * B (patterns are merged).
  static SparseSymmetric combine(double a, const SparseSymmetric& A, double b,
                                 const SparseSymmetric& B);

  std::size_t size() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return offsets_; }
  std::span<const int> columns() const noexcept { return columns_; }
  std::span<const double> values() const noexcept { return values_; }

  double at(std::size_t i, std::size_t j) const noexcept;
  std::vector<double> diagonal() const;
  double total() const noexcept;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> operator*(std::span<const double> x) const;
  /// x^T A y.
  double bilinear(std::span<const double> x, std::span<const double> y) const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<int> columns_;
  std::vector<double> values_;
};

/// Zero-fill incomplete Cholesky factor L with L L^T ~ A on the lower pattern of A.
/// Breakdown (non-positive pivot) is handled by retrying on A + alpha diag(A)
/// with alpha growing geometrically.
class IncompleteCholesky {
 public:
  explicit IncompleteCholesky(const SparseSymmetric& a);

  /// z = (L L^T)^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;
  double shift() const noexcept { return shift_; }

 private:
  bool factor(const SparseSymmetric& a, double alpha);

  std::size_t n_ = 0;
  std::vector<std::size_t> offsets_;  // lower triangle incl. diagonal (last in row)
  std::vector<int> columns_;
  std::vector<double> values_;
  double shift_ = 0.0;
};

struct CgResult {
  int iterations = 0;
  double residual = 0.0;  // ||b - A x|| / ||b||
  bool converged = false;
};

/// Preconditioned conjugate gradients; `x` holds the initial guess on entry.
CgResult conjugate_gradient(const SparseSymmetric& a, std::span<const double> b, std::span<double> x,
                            const IncompleteCholesky& precond, double rel_tol, int max_iterations);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace annulus
