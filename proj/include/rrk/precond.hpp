#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "rrk/dense.hpp"
#include "rrk/sparse.hpp"

namespace rrk {

enum class PreconditionerKind { AT, DIAG_AT, NRSSOR };

std::string_view to_string(PreconditionerKind kind) noexcept;

/// Right preconditioner B = C A^T, mapping R^m -> R^n, applied matrix-free.
///
///  - AT:      C = I
///  - DIAG_AT: C = diag(A^T A)^{-1}
///  - NRSSOR:  C = C^(l), i.e. l symmetric SOR sweeps over the columns of A
///             applied to the normal equations, started from zero.
///
/// The preconditioner keeps its own copy of A's columns and is immutable;
/// concurrent apply() calls are safe.
class RightPreconditioner {
 public:
  static RightPreconditioner transpose(const SparseMatrixCSR& a);
  static RightPreconditioner diagonal(const SparseMatrixCSR& a);
  static RightPreconditioner nr_ssor(const SparseMatrixCSR& a, double omega = 1.0, int inner_iters = 1);

  PreconditionerKind kind() const noexcept { return kind_; }
  double omega() const noexcept { return omega_; }
  int inner_iters() const noexcept { return inner_iters_; }
  std::size_t rows() const noexcept { return columns_.ncols(); }  // m
  std::size_t cols() const noexcept { return columns_.nrows(); }  // n
  std::span<const double> column_sq_norms() const noexcept { return col_sq_norms_; }

  void apply(std::span<const double> c, std::span<double> z) const;
  Vector apply(std::span<const double> c) const;

 private:
  RightPreconditioner(PreconditionerKind kind, const SparseMatrixCSR& a, double omega, int inner_iters);

  void apply_nr_ssor(std::span<const double> c, std::span<double> z) const;

  PreconditionerKind kind_;
  SparseMatrixCSR columns_;  // A^T: row j holds column a_j
  Vector col_sq_norms_;
  double omega_ = 1.0;
  int inner_iters_ = 1;
};

// Dense oracles. Gated to n <= 512 and never used on the solver path.

/// M = (omega (2 - omega))^{-1} (D + omega L) D^{-1} (D + omega L^T), with A^T A = L + D + L^T.
DenseMatrix materialize_M(const SparseMatrixCSR& a, double omega);

/// M^{-1}, built from the triangular factors of M.
DenseMatrix materialize_M_inverse(const SparseMatrixCSR& a, double omega);

/// C^(l) = sum_{i<l} H^i M^{-1} with H = I - M^{-1} A^T A.
DenseMatrix materialize_C(const SparseMatrixCSR& a, double omega, int inner_iters);

/// Spectral radius of H over the eigenvalues that belong to R(A^T).
///
/// H is semiconvergent: it has eigenvalue 1 on N(A) for rank-deficient A.
/// Those eigenvalues are excluded, so the result is the contraction factor
/// that bounds the clustering of A C^(l) A^T. Computed from the symmetric
/// similar form I - F^{-1} A^T A F^{-T}, where M = F F^T.
double spectral_radius_H(const SparseMatrixCSR& a, double omega);

}  // namespace rrk
