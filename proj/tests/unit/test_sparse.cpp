#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "annulus/sparse.hpp"

using namespace annulus;

namespace {

// 1D Dirichlet Laplacian plus a diagonal shift: SPD and tridiagonal.
SparseSymmetric laplacian_1d(int n, double shift) {
  std::vector<Triplet> t;
  for (int i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0 + shift});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SparseSymmetric::from_triplets(n, t);
}

// Thomas algorithm: independent direct solve for tridiagonal systems.
std::vector<double> thomas(const SparseSymmetric& a, std::vector<double> b) {
  const std::size_t n = b.size();
  std::vector<double> c(n), d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a.at(i, i);
  for (std::size_t i = 1; i < n; ++i) {
    const double m = a.at(i, i - 1) / d[i - 1];
    d[i] -= m * a.at(i - 1, i);
    b[i] -= m * b[i - 1];
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    x[i] = (b[i] - (i + 1 < n ? a.at(i, i + 1) * x[i + 1] : 0.0)) / d[i];
  }
  return x;
}

}  // namespace

TEST(SparseSymmetric, TripletsAreSymmetrizedAndSummed) {
  const std::vector<Triplet> t = {{0, 1, 2.0}, {1, 0, 3.0}, {0, 0, 1.0}, {0, 0, 1.5}, {1, 1, 4.0}};
  const auto a = SparseSymmetric::from_triplets(2, t);
  EXPECT_DOUBLE_EQ(a.at(0, 1), 5.0);
  EXPECT_DOUBLE_EQ(a.at(1, 0), 5.0);
  EXPECT_DOUBLE_EQ(a.at(0, 0), 2.5);
  EXPECT_DOUBLE_EQ(a.total(), 2.5 + 4.0 + 10.0);
  EXPECT_EQ(a.nonzeros(), 4u);
}

TEST(SparseSymmetric, MultiplyAndBilinear) {
  const auto a = laplacian_1d(5, 0.0);
  const std::vector<double> x = {1, 2, 3, 4, 5};
  const auto y = a * x;
  EXPECT_DOUBLE_EQ(y[0], 0.0);
  EXPECT_DOUBLE_EQ(y[2], 0.0);
  EXPECT_DOUBLE_EQ(y[4], 6.0);
  EXPECT_DOUBLE_EQ(a.bilinear(x, x), dot(x, y));
}

TEST(SparseSymmetric, Combine) {
  const auto a = laplacian_1d(4, 0.0);
  const auto i = SparseSymmetric::identity(4);
  const auto c = SparseSymmetric::combine(2.0, a, -1.0, i);
  EXPECT_DOUBLE_EQ(c.at(0, 0), 3.0);
  EXPECT_DOUBLE_EQ(c.at(0, 1), -2.0);
}

TEST(ConjugateGradient, MatchesDirectTridiagonalSolve) {
  const auto a = laplacian_1d(400, 1e-3);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> b(400);
  for (auto& v : b) v = u(rng);
  std::vector<double> x(400, 0.0);
  const IncompleteCholesky ic(a);
  const auto r = conjugate_gradient(a, b, x, ic, 1e-13, 2000);
  ASSERT_TRUE(r.converged);
  const auto ref = thomas(a, b);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(x[i], ref[i], 1e-8 * (1 + std::abs(ref[i])));
}

TEST(IncompleteCholesky, ExactOnTridiagonal) {
  // Zero fill is exact for a tridiagonal matrix: one PCG step converges.
  const auto a = laplacian_1d(50, 0.5);
  const IncompleteCholesky ic(a);
  EXPECT_DOUBLE_EQ(ic.shift(), 0.0);
  std::vector<double> b(50, 1.0), x(50, 0.0);
  const auto r = conjugate_gradient(a, b, x, ic, 1e-12, 10);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, 2);
}

TEST(ConjugateGradient, ReportsNonConvergence) {
  const auto a = laplacian_1d(500, 0.0);
  std::vector<double> b(500, 1.0), x(500, 0.0);
  std::vector<Triplet> diag;
  for (int i = 0; i < 500; ++i) diag.push_back({i, i, 1.0});
  const IncompleteCholesky jacobi_like(SparseSymmetric::from_triplets(500, diag));
  const auto r = conjugate_gradient(a, b, x, jacobi_like, 1e-14, 5);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 5);
  EXPECT_GT(r.residual, 1e-14);
}
