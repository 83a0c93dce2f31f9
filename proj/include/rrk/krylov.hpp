#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "rrk/analysis_types.hpp"
#include "rrk/dense.hpp"
#include "rrk/precond.hpp"
#include "rrk/sparse.hpp"

namespace rrk {

enum class Orthogonalization {
  MGS,  // modified Gram-Schmidt, one reorthogonalization pass when more than half the norm is lost
  CGS,  // classical Gram-Schmidt as in the textbook pseudocode, no reorthogonalization
};

enum class KrylovMethod { GMRES, RRGMRES };

enum class SolveStatus { CONVERGED_NE, CONVERGED_RES, HAPPY_BREAKDOWN, MAX_ITERS, STAGNATED };

std::string_view to_string(SolveStatus status) noexcept;
std::string_view to_string(KrylovMethod method) noexcept;

struct SolverOptions {
  std::size_t max_iters = 1000;
  double tol_ne = 1e-7;                 // stop when ||A^T r_k|| / ||A^T b|| < tol_ne
  std::optional<double> tol_res;        // stop when ||r_k|| / ||b|| < tol_res
  double breakdown_tol = 1e-14;         // |h_{k+1,k}| <= breakdown_tol * operator scale
  Orthogonalization orthogonalization = Orthogonalization::MGS;
  bool record_history = true;
  std::size_t stagnation_window = 30;   // iterations without NE improvement before STAGNATED
  bool keep_basis = false;              // return the Arnoldi vectors (diagnostics and tests)

  void validate() const;
};

struct SolveOutcome {
  Vector x;
  std::size_t iterations = 0;
  SolveStatus status = SolveStatus::MAX_ITERS;
  ConvergenceHistory history;
  double final_ne = 0.0;       // ||A^T (b - A x)|| / ||A^T b|| for the returned x
  double final_res = 0.0;      // ||b - A x||
  double solve_seconds = 0.0;  // diagnostics excluded
  std::optional<DenseMatrix> hessenberg;  // (k+1) x k, kept when record_history is set
  std::optional<DenseMatrix> basis;       // dim x (number of Arnoldi vectors), kept when keep_basis is set
};

/// GMRES on a square system, Krylov space K_k(A, r0).
SolveOutcome gmres(const SparseMatrixCSR& a, std::span<const double> b, std::span<const double> x0, const SolverOptions& opts);

/// Range-restricted GMRES on a square system, Krylov space K_k(A, A r0).
SolveOutcome rrgmres(const SparseMatrixCSR& a, std::span<const double> b, std::span<const double> x0, const SolverOptions& opts);

/// Right-preconditioned solve of min_z ||b - A B z|| over R^m, returning x = B z.
/// With B = C A^T and C symmetric positive definite, A B is symmetric, so
/// the RRGMRES variant reaches a least-squares solution for any b.
SolveOutcome ab_solve(const SparseMatrixCSR& a, const RightPreconditioner& b_op, std::span<const double> b,
                      const SolverOptions& opts, KrylovMethod method);

/// The un-rotated Hessenberg matrix of a recorded solve.
DenseMatrix extract_hessenberg(const SolveOutcome& outcome);

}  // namespace rrk
