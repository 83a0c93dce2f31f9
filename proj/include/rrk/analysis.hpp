#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>

#include "rrk/analysis_types.hpp"
#include "rrk/dense.hpp"
#include "rrk/sparse.hpp"

namespace rrk {

/// ||A^T (b - A x)|| / ||A^T b||. Throws DegenerateInputError when A^T b = 0.
double ne_residual_ratio(const SparseMatrixCSR& a, std::span<const double> b, std::span<const double> x);

/// Number of singular values above tol (default max(m,n) * 2^-52 * sigma_1). Dense path, min(m,n) <= 512.
std::size_t numerical_rank(const SparseMatrixCSR& a, std::optional<double> tol = std::nullopt);

/// sigma_1 / sigma_r with r the numerical rank.
double condition_number(const SparseMatrixCSR& a);

/// ||P_N(A) x||, with N(A) taken as the orthogonal complement of the
/// right singular vectors above the rank tolerance.
double nullspace_component(const SparseMatrixCSR& a, std::span<const double> x);

/// Eigenvalue layout of G = A C^(l) A^T against the interval
/// [1 - rho(H)^l, 1] (l even) or [1 - rho(H)^l, 1 + rho(H)^l] (l odd).
struct SpectralReport {
  std::size_t dimension = 0;  // m
  std::size_t rank = 0;       // r
  int inner_iters = 0;
  double omega = 0.0;
  double rho_h = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double slack = 1e-8;
  std::size_t clustered = 0;  // among the top r, inside the slackened interval
  std::size_t zero = 0;       // among the rest, |lambda| <= slack * lambda_max
  std::size_t outliers = 0;   // everything else; clustered + zero + outliers = dimension
  double lambda_max = 0.0;
  double max_zero_magnitude = 0.0;
  double max_cluster_deviation = 0.0;  // max |lambda - 1| over the top r
  double g_asymmetry = 0.0;            // ||G - G^T||_max / ||G||_max
  double spectrum_mismatch = 0.0;      // top-r eigenvalues of A C A^T vs C A^T A, relative to lambda_max

  bool clustering_holds() const noexcept { return outliers == 0 && clustered == rank && zero + rank == dimension; }
  bool spectra_match(double tol = 1e-8) const noexcept { return spectrum_mismatch <= tol; }
  bool passes() const noexcept { return clustering_holds() && spectra_match(); }
};

/// Desk-scale check (m, n <= 256) of the eigenvalue clustering of A C^(l) A^T,
/// including the comparison of its nonzero spectrum with that of C^(l) A^T A
/// (computed from the symmetric similar form L^T A^T A L, C = L L^T).
SpectralReport verify_clustering(const SparseMatrixCSR& a, double omega, int inner_iters);

/// Writes `iteration,res_norm,ne_res_rel,elapsed_sec` then one row per entry, 17 significant digits.
void export_history_csv(const ConvergenceHistory& h, std::ostream& out);
void export_history_csv(const ConvergenceHistory& h, const std::filesystem::path& path);

/// Inverse of export_history_csv (decomposition columns are not stored and read back as 0).
ConvergenceHistory read_history_csv(std::istream& in);
ConvergenceHistory read_history_csv(const std::filesystem::path& path);

}  // namespace rrk
