#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "rrk/sparse.hpp"

namespace rrk {

/// Row-major dense matrix for desk-scale oracles (at most a few hundred rows).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> data() const noexcept { return data_; }

  Vector column(std::size_t j) const;
  DenseMatrix transpose() const;
  DenseMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;

  double frobenius_norm() const noexcept;
  double max_abs() const noexcept;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);
Vector operator*(const DenseMatrix& a, std::span<const double> x);

/// Largest |a_ij - a_ji|.
double asymmetry(const DenseMatrix& a);

inline constexpr std::size_t kDenseSizeCap = 512;

struct SymmetricEigen {
  Vector values;        // descending
  DenseMatrix vectors;  // column j pairs with values[j]
};

/// Cyclic Jacobi. Requires |s_ij - s_ji| <= 1e-12 * max|s| and size <= 512.
SymmetricEigen dense_symmetric_eig(const DenseMatrix& s);

struct Svd {
  DenseMatrix u;        // m x p, p = min(m, n)
  Vector singular;      // length p, descending, nonnegative
  DenseMatrix v;        // n x p
};

/// One-sided Jacobi (Hestenes). Requires min(m, n) <= 512.
Svd dense_svd(const DenseMatrix& a);

/// Count of singular values above `tol`; the default tolerance is max(m, n) * 2^-52 * sigma_1.
std::size_t rank_from_singular_values(std::span<const double> singular, std::size_t m, std::size_t n,
                                      std::optional<double> tol = std::nullopt);

struct CholeskyResult {
  std::optional<DenseMatrix> lower;
  std::size_t failed_pivot = 0;  // 1-based; 0 on success
  bool ok() const noexcept { return lower.has_value(); }
};

/// S = L L^T. A non-positive pivot is reported, not thrown.
CholeskyResult cholesky(const DenseMatrix& s);

/// Solves L X = B (lower) or U X = B (upper) for square triangular T; B is overwritten.
void solve_lower_in_place(const DenseMatrix& l, DenseMatrix& b);
void solve_upper_in_place(const DenseMatrix& u, DenseMatrix& b);

/// Incrementally Givens-reduced (k+1) x k upper Hessenberg least-squares problem
///   min_y || H y - g ||_2.
/// Columns arrive one at a time together with the next entry of g.
class HessenbergFactorization {
 public:
  HessenbergFactorization() = default;

  /// Sets g_1. Must be called before the first column.
  void start(double g1);

  /// Appends column k (0-based) with entries h_{0..k+1,k}, and g_{k+1}.
  void add_column(std::span<const double> column, double g_next);

  std::size_t columns() const noexcept { return k_; }

  /// Minimizer of the current problem. A rotated pivot below 1e-14 * ||H||_F
  /// gets y component 0 (minimum-norm completion of a happy breakdown).
  Vector solve() const;

  /// ||H y - g|| for y = solve().
  double residual_norm() const;

  /// |g~_{k+1}|: the trailing rotated entry.
  double trailing_residual() const noexcept { return k_ ? std::abs(rhs_[k_]) : std::abs(g1_); }

  /// Upper Hessenberg matrix as supplied (un-rotated).
  DenseMatrix hessenberg() const;

 private:
  bool pivot_is_zero(std::size_t j) const noexcept;

  std::size_t k_ = 0;
  double g1_ = 0.0;
  double h_norm_sq_ = 0.0;
  std::vector<Vector> raw_;      // raw_[j] = h_{0..j+1,j}
  std::vector<Vector> r_;        // r_[j] = rotated column j, entries 0..j
  std::vector<double> cos_, sin_;
  Vector rhs_;                   // rotated g, length k+1
};

/// One-shot wrapper over HessenbergFactorization.
struct HessenbergLsResult {
  Vector y;
  double residual_norm;
};
HessenbergLsResult hessenberg_least_squares(const DenseMatrix& h, std::span<const double> g);

}  // namespace rrk
