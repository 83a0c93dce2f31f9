#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rrk/kernels.hpp"

namespace rrk {

using Vector = std::vector<double>;

class DenseMatrix;

struct Triplet {
  index_t row;
  index_t col;
  double value;
};

/// Compressed sparse row matrix. Immutable once constructed.
///
/// Invariants (checked by the constructor): row_ptr nondecreasing with
/// row_ptr[0] = 0 and row_ptr[nrows] = nnz; column indices strictly
/// increasing within each row and < ncols; all values finite.
class SparseMatrixCSR {
 public:
  SparseMatrixCSR() = default;
  SparseMatrixCSR(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
                  std::vector<index_t> col_idx, std::vector<double> values);

  /// Duplicates are summed; explicit zeros are kept as stored entries.
  static SparseMatrixCSR from_coordinates(std::span<const Triplet> triplets, std::size_t nrows, std::size_t ncols);
  static SparseMatrixCSR identity(std::size_t n);
  /// Entries with |a_ij| == 0 are dropped.
  static SparseMatrixCSR from_dense(const DenseMatrix& dense);

  std::size_t nrows() const noexcept { return nrows_; }
  std::size_t ncols() const noexcept { return ncols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const index_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const index_t> row_cols(std::size_t i) const noexcept {
    return {col_idx_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(std::size_t i) const noexcept {
    return {values_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  SparseMatrixCSR transpose() const;
  std::vector<Triplet> to_triplets() const;
  DenseMatrix to_dense() const;
  double frobenius_norm() const noexcept;

  friend bool operator==(const SparseMatrixCSR&, const SparseMatrixCSR&) = default;

 private:
  std::size_t nrows_ = 0;
  std::size_t ncols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<index_t> col_idx_;
  std::vector<double> values_;
};

/// y = A x, each y_i accumulated left to right over the stored row.
Vector matvec(const SparseMatrixCSR& a, std::span<const double> x);
void matvec(const SparseMatrixCSR& a, std::span<const double> x, std::span<double> y);

/// y = A^T x without forming A^T.
Vector matvec_transpose(const SparseMatrixCSR& a, std::span<const double> x);
void matvec_transpose(const SparseMatrixCSR& a, std::span<const double> x, std::span<double> y);

/// Squared Euclidean norm of every column. Zero columns give 0.
Vector column_sq_norms(const SparseMatrixCSR& a);

struct CompactResult {
  SparseMatrixCSR matrix;
  std::vector<std::size_t> row_map;  // new row -> original row
  std::vector<std::size_t> col_map;  // new column -> original column
  std::size_t removed_rows = 0;
  std::size_t removed_cols = 0;
};

/// Removes rows and columns whose stored values are all zero.
/// Throws DegenerateInputError when nothing would remain.
CompactResult compact(const SparseMatrixCSR& a);

}  // namespace rrk
