#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "rrk/dense.hpp"
#include "rrk/errors.hpp"
#include "rrk/problems.hpp"

namespace {

using rrk::DenseMatrix;
using rrk::Vector;

double eig_residual(const DenseMatrix& s, const rrk::SymmetricEigen& e) {
  const DenseMatrix sv = oracle::dense_product(s, e.vectors);
  double r = 0.0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j = 0; j < s.cols(); ++j) r = std::max(r, std::abs(sv(i, j) - e.vectors(i, j) * e.values[j]));
  return r;
}

double svd_residual(const DenseMatrix& a, const rrk::Svd& s) {
  DenseMatrix us = s.u;
  for (std::size_t i = 0; i < us.rows(); ++i)
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= s.singular[j];
  return oracle::max_abs_diff(a, oracle::dense_product(us, oracle::dense_transpose(s.v)));
}

DenseMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
  DenseMatrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) s(i, j) = s(j, i) = oracle::uniform(rng);
  return s;
}

TEST(SymmetricEig, Diagonal) {
  const auto e = rrk::dense_symmetric_eig(DenseMatrix(2, 2, {1, 0, 0, 3}));
  EXPECT_EQ(e.values, (Vector{3.0, 1.0}));
}

TEST(SymmetricEig, Swap) {
  const auto e = rrk::dense_symmetric_eig(DenseMatrix(2, 2, {0, 1, 1, 0}));
  EXPECT_NEAR(e.values[0], 1.0, 1e-15);
  EXPECT_NEAR(e.values[1], -1.0, 1e-15);
}

TEST(SymmetricEig, GramMatrixIsPositive) {
  std::mt19937_64 rng(1);
  const DenseMatrix g = oracle::random_dense(8, 8, rng);
  const DenseMatrix s = oracle::dense_product(oracle::dense_transpose(g), g);
  for (double v : rrk::dense_symmetric_eig(s).values) EXPECT_GT(v, 0.0);
}

TEST(SymmetricEig, AsymmetricInputIsContractError) {
  EXPECT_THROW(rrk::dense_symmetric_eig(DenseMatrix(2, 2, {1, 2, 0, 1})), rrk::ContractError);
  EXPECT_THROW(rrk::dense_symmetric_eig(DenseMatrix(2, 3)), rrk::ContractError);
}

TEST(SymmetricEig, ReconstructsRandomInputs) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = oracle::pick(rng, 1, 64);
    const DenseMatrix s = random_symmetric(n, rng);
    const auto e = rrk::dense_symmetric_eig(s);
    EXPECT_LE(eig_residual(s, e), 1e-10 * s.frobenius_norm()) << "n=" << n;
    for (std::size_t k = 1; k < n; ++k) EXPECT_GE(e.values[k - 1], e.values[k]);
    const DenseMatrix vtv = oracle::dense_product(oracle::dense_transpose(e.vectors), e.vectors);
    EXPECT_LE(oracle::max_abs_diff(vtv, DenseMatrix::identity(n)), 1e-12);
  }
}

TEST(Svd, Identity) {
  for (double s : rrk::dense_svd(DenseMatrix::identity(4)).singular) EXPECT_DOUBLE_EQ(s, 1.0);
}

TEST(Svd, DiagonalWithZero) {
  const auto s = rrk::dense_svd(DenseMatrix(2, 2, {2, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(s.singular[0], 2.0);
  EXPECT_DOUBLE_EQ(s.singular[1], 0.0);
}

TEST(Svd, ReconstructsRandomInputs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 64), n = oracle::pick(rng, 1, 64);
    const DenseMatrix a = oracle::random_dense(m, n, rng);
    const auto s = rrk::dense_svd(a);
    ASSERT_EQ(s.singular.size(), std::min(m, n));
    EXPECT_LE(svd_residual(a, s), 1e-10 * s.singular[0]) << m << "x" << n;
    for (std::size_t k = 0; k < s.singular.size(); ++k) {
      EXPECT_GE(s.singular[k], 0.0);
      if (k) {
        EXPECT_GE(s.singular[k - 1], s.singular[k]);
      }
    }
  }
}

TEST(Svd, RankDeficientReconstruction) {
  std::mt19937_64 rng(4);
  const DenseMatrix l = oracle::random_dense(12, 3, rng), r = oracle::random_dense(3, 9, rng);
  const DenseMatrix a = oracle::dense_product(l, r);
  const auto s = rrk::dense_svd(a);
  EXPECT_LE(svd_residual(a, s), 1e-10 * s.singular[0]);
  EXPECT_EQ(rrk::rank_from_singular_values(s.singular, 12, 9), 3u);
}

TEST(Svd, GpConditionNumber) {
  const auto s = rrk::dense_svd(rrk::gp_matrix(12, 12).to_dense());
  const double kappa = s.singular[0] / s.singular[63];
  EXPECT_GT(kappa, 2.29e12 / 1.05);
  EXPECT_LT(kappa, 2.29e12 * 1.05);
}

TEST(Svd, SizeCap) {
  EXPECT_THROW(rrk::dense_svd(DenseMatrix(rrk::kDenseSizeCap + 1, rrk::kDenseSizeCap + 1)), rrk::ContractError);
}

TEST(Rank, ToleranceFormula) {
  const Vector sv{1.0, 1e-20};
  EXPECT_EQ(rrk::rank_from_singular_values(sv, 2, 2), 1u);
  EXPECT_EQ(rrk::rank_from_singular_values(sv, 2, 2, 1e-30), 2u);
  EXPECT_EQ(rrk::rank_from_singular_values(Vector{0.0, 0.0}, 2, 2), 0u);
}

TEST(Cholesky, Identity) {
  const auto c = rrk::cholesky(DenseMatrix::identity(3));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(*c.lower, DenseMatrix::identity(3));
}

TEST(Cholesky, TwoByTwo) {
  const auto c = rrk::cholesky(DenseMatrix(2, 2, {4, 2, 2, 2}));
  ASSERT_TRUE(c.ok());
  EXPECT_EQ(*c.lower, DenseMatrix(2, 2, {2, 0, 1, 1}));
}

TEST(Cholesky, IndefiniteFailsAtSecondPivot) {
  const auto c = rrk::cholesky(DenseMatrix(2, 2, {1, 2, 2, 1}));
  EXPECT_FALSE(c.ok());
  EXPECT_EQ(c.failed_pivot, 2u);
}

TEST(Cholesky, RandomSpdReconstructs) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = oracle::pick(rng, 1, 30);
    const DenseMatrix g = oracle::random_dense(n + 2, n, rng);
    const DenseMatrix s = oracle::dense_product(oracle::dense_transpose(g), g);
    const auto c = rrk::cholesky(s);
    ASSERT_TRUE(c.ok());
    const DenseMatrix llt = oracle::dense_product(*c.lower, oracle::dense_transpose(*c.lower));
    EXPECT_LE(oracle::max_abs_diff(llt, s), 1e-10 * s.frobenius_norm());
  }
}

TEST(TriangularSolves, MatchLu) {
  std::mt19937_64 rng(6);
  DenseMatrix l = oracle::random_dense(5, 5, rng);
  for (std::size_t i = 0; i < 5; ++i) {
    l(i, i) = 2.0 + std::abs(l(i, i));
    for (std::size_t j = i + 1; j < 5; ++j) l(i, j) = 0.0;
  }
  const DenseMatrix b = oracle::random_dense(5, 3, rng);
  DenseMatrix x = b;
  rrk::solve_lower_in_place(l, x);
  EXPECT_LE(oracle::max_abs_diff(x, oracle::lu_solve(l, b)), 1e-13);
  const DenseMatrix u = oracle::dense_transpose(l);
  DenseMatrix y = b;
  rrk::solve_upper_in_place(u, y);
  EXPECT_LE(oracle::max_abs_diff(y, oracle::lu_solve(u, b)), 1e-13);
}

TEST(HessenbergLs, ConsistentSingleColumn) {
  const auto r = rrk::hessenberg_least_squares(DenseMatrix(2, 1, {1, 0}), Vector{2, 0});
  EXPECT_EQ(r.y, Vector{2.0});
  EXPECT_DOUBLE_EQ(r.residual_norm, 0.0);
}

TEST(HessenbergLs, OrthogonalRightHandSide) {
  const auto r = rrk::hessenberg_least_squares(DenseMatrix(2, 1, {1, 0}), Vector{0, 3});
  EXPECT_EQ(r.y, Vector{0.0});
  EXPECT_DOUBLE_EQ(r.residual_norm, 3.0);
}

TEST(HessenbergLs, ZeroPivotGivesZeroComponent) {
  const auto r = rrk::hessenberg_least_squares(DenseMatrix(2, 1, {0, 0}), Vector{1, 0});
  EXPECT_EQ(r.y, Vector{0.0});
  EXPECT_DOUBLE_EQ(r.residual_norm, 1.0);
}

TEST(HessenbergLs, RandomMatchesNormalEquations) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix h(6, 5);
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t i = 0; i <= j + 1; ++i) h(i, j) = oracle::uniform(rng);
    const Vector g = oracle::random_vector(6, rng);
    const auto r = rrk::hessenberg_least_squares(h, g);
    const Vector ref = oracle::normal_equations_solve(h, g);
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(r.y[j], ref[j], 1e-10 * (1.0 + std::abs(ref[j])));
    EXPECT_NEAR(r.residual_norm, oracle::norm(oracle::sub(oracle::dense_matvec(h, r.y), g)), 1e-12);
  }
}

TEST(HessenbergLs, RejectsNonHessenbergInput) {
  EXPECT_THROW(rrk::hessenberg_least_squares(DenseMatrix(3, 2, {1, 1, 1, 1, 1, 1}), Vector{1, 0, 0}), rrk::StructuralError);
  EXPECT_THROW(rrk::hessenberg_least_squares(DenseMatrix(2, 1, {1, 0}), Vector{1, 0, 0}), rrk::StructuralError);
}

TEST(HessenbergFactorization, IncrementalMatchesBatch) {
  std::mt19937_64 rng(8);
  rrk::HessenbergFactorization f;
  f.start(1.7);
  DenseMatrix h(6, 5);
  Vector g(6, 0.0);
  g[0] = 1.7;
  for (std::size_t j = 0; j < 5; ++j) {
    Vector col(j + 2);
    for (double& v : col) v = oracle::uniform(rng);
    for (std::size_t i = 0; i <= j + 1; ++i) h(i, j) = col[i];
    g[j + 1] = 0.0;
    f.add_column(col, 0.0);
    const auto batch = rrk::hessenberg_least_squares(h.block(0, 0, j + 2, j + 1), Vector(g.begin(), g.begin() + j + 2));
    const Vector y = f.solve();
    for (std::size_t i = 0; i <= j; ++i) EXPECT_NEAR(y[i], batch.y[i], 1e-12 * (1.0 + std::abs(batch.y[i])));
    EXPECT_NEAR(f.residual_norm(), batch.residual_norm, 1e-13);
  }
  EXPECT_EQ(f.hessenberg(), h);
}

}  // namespace
