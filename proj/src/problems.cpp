#include "rrk/problems.hpp"

#include <cmath>
#include <string>

#include "rrk/errors.hpp"
#include "rrk/kernels.hpp"
#include "rrk/matrix_market.hpp"

namespace rrk {

void ProblemSpec::validate() const {
  if (family == ProblemFamily::GP || family == ProblemFamily::INDEX2) {
    if (!(rho > 0.0) || !(gamma > 0.0)) throw PreconditionError("rho and gamma must be positive");
  }
  if (!(noise >= 0.0)) throw PreconditionError("noise must be nonnegative");
  if (family == ProblemFamily::MATRIX_MARKET && !path) throw PreconditionError("matrix-market problem needs a path");
  if (family == ProblemFamily::RANDOM_RANGE_SYM && (rank_r < 1 || rank_r > n))
    throw PreconditionError("random range-symmetric problem needs 1 <= rank <= n");
}

DenseMatrix jordan_block(std::size_t k, double lambda) {
  if (k < 1) throw PreconditionError("jordan_block: k must be >= 1");
  DenseMatrix j(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    j(i, i) = lambda;
    if (i + 1 < k) j(i, i + 1) = 1.0;
  }
  return j;
}

Vector gp_alpha(double rho) {
  Vector alpha(16);
  const double last = std::pow(10.0, -rho);
  alpha[0] = 1.0;
  alpha[15] = last;
  for (int j = 2; j <= 15; ++j)
    alpha[static_cast<std::size_t>(j - 1)] = last + (16.0 - j) / 15.0 * (1.0 - last) * std::pow(0.7, j - 1);
  return alpha;
}

Vector gp_beta(double gamma) {
  Vector beta(32);
  const double last = std::pow(10.0, -gamma);
  beta[0] = 1.0;
  beta[31] = last;
  for (int i = 2; i <= 31; ++i)
    beta[static_cast<std::size_t>(i - 1)] = last + (32.0 - i) / 31.0 * (1.0 - last) * std::pow(0.2, i - 1);
  return beta;
}

namespace {

// Upper 64 rows shared by both block matrices: [A11 A12].
std::vector<Triplet> upper_blocks(double rho, double gamma) {
  const Vector alpha = gp_alpha(rho);
  const Vector beta = gp_beta(gamma);
  std::vector<Triplet> t;
  auto jordan2 = [&t](index_t row0, index_t col0, double lambda) {
    t.push_back({row0, col0, lambda});
    t.push_back({row0, col0 + 1, 1.0});
    t.push_back({row0 + 1, col0 + 1, lambda});
  };
  // W = blockdiag(J2(alpha_1..16)) in rows/cols 0..31
  for (index_t j = 0; j < 16; ++j) jordan2(2 * j, 2 * j, alpha[static_cast<std::size_t>(j)]);
  // D = diag(beta_1..32) in rows/cols 32..63
  for (index_t i = 0; i < 32; ++i) t.push_back({32 + i, 32 + i, beta[static_cast<std::size_t>(i)]});
  // A12 = blockdiag(J2(beta_1..32)) in rows 0..63, cols 64..127
  for (index_t i = 0; i < 32; ++i) jordan2(2 * i, 64 + 2 * i, beta[static_cast<std::size_t>(i)]);
  return t;
}

}  // namespace

SparseMatrixCSR gp_matrix(double rho, double gamma) {
  const auto t = upper_blocks(rho, gamma);
  return SparseMatrixCSR::from_coordinates(t, 128, 128);
}

SparseMatrixCSR index2_matrix(double rho, double gamma) {
  auto t = upper_blocks(rho, gamma);
  // A22 entry (2i-1, 2i) in 1-based block coordinates, i = 1..16
  for (index_t i = 1; i <= 16; ++i) t.push_back({64 + 2 * i - 2, 64 + 2 * i - 1, 1.0});
  return SparseMatrixCSR::from_coordinates(t, 128, 128);
}

Vector uniform_vector(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("uniform_vector: n must be >= 1");
  UniformStream rng(seed);
  Vector u(n);
  for (double& v : u) v = rng.next();
  return u;
}

Vector make_rhs_inconsistent(const SparseMatrixCSR& a, double noise, std::uint64_t seed) {
  if (!(noise >= 0.0)) throw PreconditionError("make_rhs_inconsistent: noise must be >= 0");
  const Vector ones(a.ncols(), 1.0);
  Vector b = matvec(a, ones);
  const double norm = kernels::nrm2(b);
  if (norm == 0.0) throw DegenerateInputError("make_rhs_inconsistent: A * 1 is zero");
  kernels::scale(1.0 / norm, b);
  if (noise > 0.0) {
    const Vector u = uniform_vector(a.nrows(), seed);
    kernels::axpy(noise / kernels::nrm2(u), u, b);
  }
  return b;
}

DenseMatrix random_orthogonal(std::size_t n, UniformStream& rng) {
  DenseMatrix q = DenseMatrix::identity(n);
  Vector v(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (double& x : v) x = rng.next_signed();
    const double vv = kernels::dot(v, v);
    if (vv == 0.0) continue;
    // q <- q (I - 2 v v^T / v^T v)
    for (std::size_t i = 0; i < n; ++i) {
      auto qi = q.row(i);
      const double s = 2.0 * kernels::dot(qi, v) / vv;
      kernels::axpy(-s, v, qi);
    }
  }
  return q;
}

SparseMatrixCSR random_range_symmetric(std::size_t n, std::size_t r, double cond, std::uint64_t seed) {
  if (r < 1 || r > n) throw PreconditionError("random_range_symmetric: need 1 <= r <= n");
  if (!(cond >= 1.0)) throw PreconditionError("random_range_symmetric: cond must be >= 1");
  UniformStream rng(seed);
  const DenseMatrix q = random_orthogonal(n, rng);
  const DenseMatrix u = random_orthogonal(r, rng);
  const DenseMatrix v = random_orthogonal(r, rng);
  DenseMatrix sigma(r, r);
  for (std::size_t i = 0; i < r; ++i)
    sigma(i, i) = r == 1 ? 1.0 : std::pow(cond, -static_cast<double>(i) / static_cast<double>(r - 1));
  const DenseMatrix a11 = u * sigma * v.transpose();
  DenseMatrix hat(n, n);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j) hat(i, j) = a11(i, j);
  return SparseMatrixCSR::from_dense(q * hat * q.transpose());
}

SparseMatrixCSR build_matrix(const ProblemSpec& spec) {
  spec.validate();
  switch (spec.family) {
    case ProblemFamily::GP: return gp_matrix(spec.rho, spec.gamma);
    case ProblemFamily::INDEX2: return index2_matrix(spec.rho, spec.gamma);
    case ProblemFamily::MATRIX_MARKET: return read_matrix_market(*spec.path);
    case ProblemFamily::RANDOM_RANGE_SYM: return random_range_symmetric(spec.n, spec.rank_r, spec.cond, spec.seed);
  }
  throw PreconditionError("unknown problem family");
}

}  // namespace rrk
