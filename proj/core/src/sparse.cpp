#include "annulus/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annulus/errors.hpp"

namespace annulus {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

SparseSymmetric SparseSymmetric::from_triplets(std::size_t n, std::span<const Triplet> entries) {
  struct Entry {
    int row;
    int col;
    std::size_t order;
    double value;
  };
  std::vector<Entry> all;
  all.reserve(2 * entries.size());
  std::size_t order = 0;
  for (const Triplet& t : entries) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n ||
        static_cast<std::size_t>(t.col) >= n) {
      throw RangeError("sparse entry index out of range");
    }
    const int i = std::min(t.row, t.col);
    const int j = std::max(t.row, t.col);
    all.push_back({i, j, order, t.value});
    if (i != j) all.push_back({j, i, order, t.value});
    ++order;
  }
  // Stable order within an entry keeps accumulation identical for (i,j) and (j,i).
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
    if (a.row != b.row) return a.row < b.row;
    if (a.col != b.col) return a.col < b.col;
    return a.order < b.order;
  });
  SparseSymmetric m;
  m.n_ = n;
  m.offsets_.assign(n + 1, 0);
  for (std::size_t k = 0; k < all.size();) {
    std::size_t e = k;
    double sum = 0.0;
    while (e < all.size() && all[e].row == all[k].row && all[e].col == all[k].col) {
      sum += all[e].value;
      ++e;
    }
    m.columns_.push_back(all[k].col);
    m.values_.push_back(sum);
    ++m.offsets_[static_cast<std::size_t>(all[k].row) + 1];
    k = e;
  }
  std::partial_sum(m.offsets_.begin(), m.offsets_.end(), m.offsets_.begin());
  return m;
}

SparseSymmetric SparseSymmetric::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({static_cast<int>(i), static_cast<int>(i), 1.0});
  return from_triplets(n, t);
}

SparseSymmetric SparseSymmetric::combine(double a, const SparseSymmetric& A, double b,
                                         const SparseSymmetric& B) {
  if (A.size() != B.size()) throw RangeError("matrix sizes differ");
  SparseSymmetric m;
  m.n_ = A.n_;
  m.offsets_.assign(m.n_ + 1, 0);
  for (std::size_t i = 0; i < m.n_; ++i) {
    std::size_t p = A.offsets_[i], pe = A.offsets_[i + 1];
    std::size_t q = B.offsets_[i], qe = B.offsets_[i + 1];
    while (p < pe || q < qe) {
      int col;
      double v = 0.0;
      if (q >= qe || (p < pe && A.columns_[p] < B.columns_[q])) {
        col = A.columns_[p];
        v = a * A.values_[p++];
      } else if (p >= pe || B.columns_[q] < A.columns_[p]) {
        col = B.columns_[q];
        v = b * B.values_[q++];
      } else {
        col = A.columns_[p];
        v = a * A.values_[p++] + b * B.values_[q++];
      }
      m.columns_.push_back(col);
      m.values_.push_back(v);
    }
    m.offsets_[i + 1] = m.columns_.size();
  }
  return m;
}

double SparseSymmetric::at(std::size_t i, std::size_t j) const noexcept {
  const auto begin = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
  const auto end = columns_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
  const auto it = std::lower_bound(begin, end, static_cast<int>(j));
  if (it == end || *it != static_cast<int>(j)) return 0.0;
  return values_[static_cast<std::size_t>(it - columns_.begin())];
}

std::vector<double> SparseSymmetric::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) d[i] = at(i, i);
  return d;
}

double SparseSymmetric::total() const noexcept {
  return std::accumulate(values_.begin(), values_.end(), 0.0);
}

void SparseSymmetric::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      s += values_[k] * x[static_cast<std::size_t>(columns_[k])];
    }
    y[i] = s;
  }
}

std::vector<double> SparseSymmetric::operator*(std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

double SparseSymmetric::bilinear(std::span<const double> x, std::span<const double> y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double row = 0.0;
    for (std::size_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
      row += values_[k] * y[static_cast<std::size_t>(columns_[k])];
    }
    s += x[i] * row;
  }
  return s;
}

// ---------------------------------------------------------------------------

IncompleteCholesky::IncompleteCholesky(const SparseSymmetric& a) : n_(a.size()) {
  double alpha = 0.0;
  for (int attempt = 0; attempt < 30; ++attempt) {
    if (factor(a, alpha)) {
      shift_ = alpha;
      return;
    }
    alpha = alpha == 0.0 ? 1e-4 : 4.0 * alpha;
  }
  throw NumericalFailure("incomplete Cholesky factorization broke down");
}

bool IncompleteCholesky::factor(const SparseSymmetric& a, double alpha) {
  const auto offs = a.row_offsets();
  const auto cols = a.columns();
  const auto vals = a.values();
  offsets_.assign(n_ + 1, 0);
  columns_.clear();
  values_.clear();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = offs[i]; k < offs[i + 1]; ++k) {
      const auto j = static_cast<std::size_t>(cols[k]);
      if (j > i) break;
      columns_.push_back(cols[k]);
      values_.push_back(j == i ? (1.0 + alpha) * vals[k] : vals[k]);
    }
    if (columns_.empty() || static_cast<std::size_t>(columns_.back()) != i) return false;
    offsets_[i + 1] = columns_.size();
  }
  // Row-oriented IC(0): L(i,j) = (A(i,j) - sum_k L(i,k) L(j,k)) / L(j,j), k < j on the pattern.
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t ri = offsets_[i];
    const std::size_t re = offsets_[i + 1];
    for (std::size_t p = ri; p < re; ++p) {
      const auto j = static_cast<std::size_t>(columns_[p]);
      double s = values_[p];
      // sparse dot of rows i and j over columns < j
      std::size_t q = ri;
      std::size_t r = offsets_[j];
      const std::size_t rend = offsets_[j + 1];
      while (q < p && r < rend - 1) {
        const int cq = columns_[q];
        const int cr = columns_[r];
        if (cq == cr) {
          s -= values_[q] * values_[r];
          ++q;
          ++r;
        } else if (cq < cr) {
          ++q;
        } else {
          ++r;
        }
      }
      if (j == i) {
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        values_[p] = std::sqrt(s);
      } else {
        values_[p] = s / values_[offsets_[j + 1] - 1];
      }
    }
  }
  return true;
}

void IncompleteCholesky::apply(std::span<const double> r, std::span<double> z) const {
  // L y = r
  for (std::size_t i = 0; i < n_; ++i) {
    double s = r[i];
    const std::size_t end = offsets_[i + 1] - 1;
    for (std::size_t k = offsets_[i]; k < end; ++k) s -= values_[k] * z[static_cast<std::size_t>(columns_[k])];
    z[i] = s / values_[end];
  }
  // L^T x = y
  for (std::size_t i = n_; i-- > 0;) {
    const std::size_t end = offsets_[i + 1] - 1;
    z[i] /= values_[end];
    const double zi = z[i];
    for (std::size_t k = offsets_[i]; k < end; ++k) z[static_cast<std::size_t>(columns_[k])] -= values_[k] * zi;
  }
}

CgResult conjugate_gradient(const SparseSymmetric& a, std::span<const double> b, std::span<double> x,
                            const IncompleteCholesky& precond, double rel_tol, int max_iterations) {
  const std::size_t n = a.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  a.multiply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  const double bnorm = std::max(norm2(b), 1e-300);
  CgResult res;
  res.residual = norm2(r) / bnorm;
  if (res.residual <= rel_tol) {
    res.converged = true;
    return res;
  }
  precond.apply(r, z);
  p = z;
  double rz = dot(r, z);
  for (int it = 1; it <= max_iterations; ++it) {
    a.multiply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0)) break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    res.iterations = it;
    res.residual = norm2(r) / bnorm;
    if (res.residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    precond.apply(r, z);
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

}  // namespace annulus
