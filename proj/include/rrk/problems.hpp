#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>

#include "rrk/dense.hpp"
#include "rrk/sparse.hpp"

namespace rrk {

enum class ProblemFamily { GP, INDEX2, MATRIX_MARKET, RANDOM_RANGE_SYM };

/// Declarative description of a test instance.
struct ProblemSpec {
  ProblemFamily family = ProblemFamily::GP;
  double rho = 12.0;
  double gamma = 12.0;
  double noise = 0.01;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> path;
  std::size_t n = 32;       // RANDOM_RANGE_SYM
  std::size_t rank_r = 16;  // RANDOM_RANGE_SYM
  double cond = 1e3;        // RANDOM_RANGE_SYM

  void validate() const;
};

/// Uniform [0,1) stream. The generator is std::mt19937_64 (fully specified by
/// the C++ standard) and each draw is (word >> 11) * 2^-53, so a seed yields
/// the same bits on every conforming platform.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  /// Uniform on [-1, 1).
  double next_signed() { return 2.0 * next() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

/// J_k(lambda): lambda on the diagonal, 1 on the superdiagonal.
DenseMatrix jordan_block(std::size_t k, double lambda);

/// alpha_j (j = 1..16) and beta_i (i = 1..32) of the block test matrices.
Vector gp_alpha(double rho);
Vector gp_beta(double gamma);

/// 128 x 128 [[A11, A12], [0, 0]]: index 1, not range-symmetric.
SparseMatrixCSR gp_matrix(double rho, double gamma);

/// 128 x 128 [[A11, A12], [0, A22]] with A22 holding 16 unit entries at (2i-1, 2i): index 2.
SparseMatrixCSR index2_matrix(double rho, double gamma);

/// b = A 1 / ||A 1|| + noise * u / ||u||, u = uniform_vector(m, seed).
Vector make_rhs_inconsistent(const SparseMatrixCSR& a, double noise, std::uint64_t seed);

Vector uniform_vector(std::size_t n, std::uint64_t seed);

/// Random orthogonal n x n matrix as a product of n Householder reflectors.
DenseMatrix random_orthogonal(std::size_t n, UniformStream& rng);

/// A = Q diag(A11, 0) Q^T with A11 (r x r, nonsymmetric) of 2-norm condition `cond`.
/// R(A) = R(A^T) by construction; r = n gives a nonsingular matrix.
SparseMatrixCSR random_range_symmetric(std::size_t n, std::size_t r, double cond, std::uint64_t seed);

/// Builds the matrix named by `spec` (matrix files are read as-is).
SparseMatrixCSR build_matrix(const ProblemSpec& spec);

}  // namespace rrk
