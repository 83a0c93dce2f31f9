#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rrk/analysis.hpp"
#include "rrk/errors.hpp"
#include "rrk/krylov.hpp"
#include "rrk/precond.hpp"
#include "rrk/problems.hpp"

namespace {

using rrk::ConvergenceHistory;
using rrk::DenseMatrix;
using rrk::HistoryEntry;
using rrk::SparseMatrixCSR;
using rrk::Vector;

ConvergenceHistory sample_history(std::size_t rows) {
  ConvergenceHistory h;
  for (std::size_t k = 1; k <= rows; ++k)
    h.push({k, 1.0 / (3.0 * k), std::pow(0.1, static_cast<double>(k)) / 7.0, 1e-6 * k / 3.0, 0.0, 0.0});
  return h;
}

TEST(NeResidualRatio, Examples) {
  const auto a = SparseMatrixCSR::from_dense(DenseMatrix(2, 2, {2, 1, 0, 3}));
  const Vector b{3, 3};
  EXPECT_DOUBLE_EQ(rrk::ne_residual_ratio(a, b, Vector{1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(rrk::ne_residual_ratio(a, b, Vector{0, 0}), 1.0);
  const auto nil = SparseMatrixCSR::from_dense(DenseMatrix(2, 2, {0, 1, 0, 0}));
  EXPECT_THROW(rrk::ne_residual_ratio(nil, Vector{0, 1}, Vector{0, 0}), rrk::DegenerateInputError);
  EXPECT_THROW(rrk::ne_residual_ratio(a, Vector{1}, Vector{0, 0}), rrk::StructuralError);
}

TEST(NeResidualRatio, LeastSquaresSolutionIsStationary) {
  std::mt19937_64 rng(51);
  const DenseMatrix d = oracle::random_dense(8, 4, rng);
  const Vector b = oracle::random_vector(8, rng);
  const Vector x = oracle::normal_equations_solve(d, b);
  EXPECT_LE(rrk::ne_residual_ratio(SparseMatrixCSR::from_dense(d), b, x), 1e-12);
}

TEST(NumericalRank, Examples) {
  EXPECT_EQ(rrk::numerical_rank(SparseMatrixCSR::identity(5)), 5u);
  EXPECT_EQ(rrk::numerical_rank(rrk::gp_matrix(12, 12)), 64u);
  EXPECT_EQ(rrk::numerical_rank(SparseMatrixCSR::from_dense(DenseMatrix(2, 2, {1, 0, 0, 1e-20}))), 1u);
  EXPECT_THROW(rrk::numerical_rank(SparseMatrixCSR::identity(600)), rrk::ContractError);
}

TEST(NullspaceComponent, Examples) {
  std::mt19937_64 rng(52);
  const auto full = SparseMatrixCSR::from_dense(oracle::random_dense(6, 6, rng));
  EXPECT_LE(rrk::nullspace_component(full, oracle::random_vector(6, rng)), 1e-14);
  const auto d = SparseMatrixCSR::from_dense(DenseMatrix(2, 2, {1, 0, 0, 0}));
  EXPECT_NEAR(rrk::nullspace_component(d, Vector{1, 1}), 1.0, 1e-15);
}

TEST(NullspaceComponent, TransposePreconditionedSolveOnRangeSymmetricInstance) {
  const auto a = rrk::random_range_symmetric(20, 9, 100.0, 77);
  const Vector b = rrk::uniform_vector(20, 78);
  rrk::SolverOptions o;
  o.tol_ne = 1e-13;
  const auto r = rrk::ab_solve(a, rrk::RightPreconditioner::transpose(a), b, o, rrk::KrylovMethod::RRGMRES);
  EXPECT_LE(rrk::nullspace_component(a, r.x), 1e-8 * oracle::norm(r.x));
  EXPECT_LE(oracle::off_row_space(a.to_dense(), r.x), 1e-8 * oracle::norm(r.x));
}

TEST(VerifyClustering, IdentityHasUnitSpectrum) {
  for (int ell : {1, 2, 3}) {
    const auto rep = rrk::verify_clustering(SparseMatrixCSR::identity(6), 1.0, ell);
    EXPECT_NEAR(rep.rho_h, 0.0, 1e-15);
    EXPECT_EQ(rep.clustered, 6u);
    EXPECT_NEAR(rep.max_cluster_deviation, 0.0, 1e-14);
    EXPECT_TRUE(rep.passes());
  }
}

TEST(VerifyClustering, TallFullRank) {
  std::mt19937_64 rng(53);
  const auto a = SparseMatrixCSR::from_dense(oracle::random_dense(10, 6, rng));
  const auto rep = rrk::verify_clustering(a, 1.0, 2);
  EXPECT_EQ(rep.rank, 6u);
  EXPECT_EQ(rep.clustered, 6u);
  EXPECT_EQ(rep.zero, 4u);
  EXPECT_EQ(rep.outliers, 0u);
  EXPECT_DOUBLE_EQ(rep.upper, 1.0);
  EXPECT_TRUE(rep.passes());
}

TEST(VerifyClustering, GpMatrix) {
  const auto rep = rrk::verify_clustering(rrk::gp_matrix(12, 12), 1.0, 1);
  EXPECT_EQ(rep.rank, 64u);
  EXPECT_EQ(rep.clustered, 64u);
  EXPECT_EQ(rep.zero, 64u);
  EXPECT_TRUE(rep.passes());
}

TEST(VerifyClustering, RandomSweep) {
  std::mt19937_64 rng(54);
  const double omegas[] = {0.5, 1.0, 1.5, 1.9};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t m = oracle::pick(rng, 1, 30), n = oracle::pick(rng, 1, 30);
    const auto a = oracle::random_sparse(m, n, 0.25, rng);
    const double omega = omegas[trial % 4];
    const int ell = 1 + (trial / 4) % 4;
    const auto rep = rrk::verify_clustering(a, omega, ell);
    EXPECT_EQ(rep.clustered + rep.zero + rep.outliers, rep.dimension);
    EXPECT_EQ(rep.dimension, m);
    EXPECT_TRUE(rep.passes()) << m << "x" << n << " omega=" << omega << " ell=" << ell << " outliers=" << rep.outliers
                              << " mismatch=" << rep.spectrum_mismatch;
    EXPECT_LE(rep.g_asymmetry, 1e-11);
  }
}

TEST(VerifyClustering, DeviationShrinksAsInnerIterationsDouble) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 5; ++trial) {
    const auto a = oracle::random_sparse(15, 10, 0.3, rng);
    double prev = INFINITY;
    for (int ell : {1, 2, 4}) {
      const auto rep = rrk::verify_clustering(a, 1.0, ell);
      EXPECT_LE(rep.max_cluster_deviation, prev * (1.0 + 1e-10) + 1e-12) << "ell=" << ell;
      prev = rep.max_cluster_deviation;
    }
  }
}

TEST(VerifyClustering, RejectsLargeMatrices) {
  EXPECT_THROW(rrk::verify_clustering(SparseMatrixCSR::identity(257), 1.0, 1), rrk::ContractError);
}

TEST(History, InvariantsAreEnforced) {
  ConvergenceHistory h;
  h.push({1, 1.0, 0.5, 0.0, 0.0, 0.0});
  EXPECT_THROW(h.push({1, 1.0, 0.5, 0.0, 0.0, 0.0}), rrk::ContractError);
  EXPECT_THROW(h.push({2, -1.0, 0.5, 0.0, 0.0, 0.0}), rrk::ContractError);
  EXPECT_THROW(h.push({2, 1.0, NAN, 0.0, 0.0, 0.0}), rrk::ContractError);
  h.push({3, 0.5, 0.25, 0.0, 0.0, 0.0});
  h.push({4, 0.5, 0.3, 0.0, 0.0, 0.0});
  EXPECT_EQ(h.min_ne(), 0.25);
  EXPECT_EQ(h.argmin_ne(), 3u);
}

TEST(Csv, OneRowGivesTwoLines) {
  std::ostringstream out;
  rrk::export_history_csv(sample_history(1), out);
  const std::string s = out.str();
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 2);
  EXPECT_EQ(s.rfind("iteration,res_norm,ne_res_rel,elapsed_sec\n", 0), 0u);
}

TEST(Csv, RoundTripIsLossless) {
  const ConvergenceHistory h = sample_history(25);
  std::stringstream s;
  rrk::export_history_csv(h, s);
  EXPECT_EQ(rrk::read_history_csv(s), h);

  const auto path = std::filesystem::temp_directory_path() / "rrk_history_roundtrip.csv";
  rrk::export_history_csv(h, path);
  EXPECT_EQ(rrk::read_history_csv(path), h);
  std::filesystem::remove(path);
}

TEST(Csv, SolverHistoryRoundTrips) {
  const auto a = rrk::gp_matrix(12, 12);
  const Vector b = rrk::make_rhs_inconsistent(a, 0.01, 7);
  rrk::SolverOptions o;
  o.tol_ne = 1e-16;
  o.max_iters = 128;
  const auto r = rrk::ab_solve(a, rrk::RightPreconditioner::nr_ssor(a), b, o, rrk::KrylovMethod::RRGMRES);
  std::stringstream s;
  rrk::export_history_csv(r.history, s);
  const auto back = rrk::read_history_csv(s);
  EXPECT_EQ(back, r.history);
  EXPECT_LE(back.min_ne(), 1e-12);
}

TEST(Csv, Errors) {
  EXPECT_THROW(rrk::export_history_csv(ConvergenceHistory{}, std::filesystem::temp_directory_path() / "x.csv"),
               rrk::ContractError);
  try {
    rrk::export_history_csv(sample_history(1), std::filesystem::path("/nonexistent-dir/h.csv"));
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent-dir/h.csv"), std::string::npos);
  }
  std::istringstream bad_header("k,r\n1,2\n");
  EXPECT_THROW(rrk::read_history_csv(bad_header), rrk::ParseError);
  std::istringstream bad_row("iteration,res_norm,ne_res_rel,elapsed_sec\n1,2,3\n");
  EXPECT_THROW(rrk::read_history_csv(bad_row), rrk::ParseError);
}

}  // namespace
