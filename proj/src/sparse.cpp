#include "rrk/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "rrk/dense.hpp"
#include "rrk/errors.hpp"

namespace rrk {

SparseMatrixCSR::SparseMatrixCSR(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_ptr,
                                 std::vector<index_t> col_idx, std::vector<double> values)
    : nrows_(nrows), ncols_(ncols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (ncols_ > static_cast<std::size_t>(std::numeric_limits<index_t>::max()))
    throw StructuralError("SparseMatrixCSR: column count exceeds the index type");
  if (row_ptr_.size() != nrows_ + 1) throw StructuralError("SparseMatrixCSR: row_ptr must have nrows+1 entries");
  if (row_ptr_.front() != 0) throw StructuralError("SparseMatrixCSR: row_ptr[0] must be 0");
  if (col_idx_.size() != values_.size()) throw StructuralError("SparseMatrixCSR: col_idx and values differ in length");
  if (row_ptr_.back() != values_.size()) throw StructuralError("SparseMatrixCSR: row_ptr[nrows] must equal nnz");
  for (std::size_t i = 0; i < nrows_; ++i) {
    if (row_ptr_[i + 1] < row_ptr_[i]) throw StructuralError("SparseMatrixCSR: row_ptr decreases at row " + std::to_string(i));
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const index_t c = col_idx_[k];
      if (c < 0 || static_cast<std::size_t>(c) >= ncols_)
        throw StructuralError("SparseMatrixCSR: column index out of range in row " + std::to_string(i));
      if (k > row_ptr_[i] && col_idx_[k - 1] >= c)
        throw StructuralError("SparseMatrixCSR: column indices not strictly increasing in row " + std::to_string(i));
      if (!std::isfinite(values_[k])) throw StructuralError("SparseMatrixCSR: non-finite value in row " + std::to_string(i));
    }
  }
}

SparseMatrixCSR SparseMatrixCSR::from_coordinates(std::span<const Triplet> triplets, std::size_t nrows, std::size_t ncols) {
  std::vector<std::size_t> counts(nrows + 1, 0);
  for (const Triplet& t : triplets) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= nrows || static_cast<std::size_t>(t.col) >= ncols)
      throw StructuralError("from_coordinates: index (" + std::to_string(t.row) + "," + std::to_string(t.col) +
                            ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols));
    ++counts[static_cast<std::size_t>(t.row) + 1];
  }
  std::partial_sum(counts.begin(), counts.end(), counts.begin());

  // bucket by row, then sort and merge each row
  std::vector<std::pair<index_t, double>> bucket(triplets.size());
  std::vector<std::size_t> next(counts.begin(), counts.end() - 1);
  for (const Triplet& t : triplets) bucket[next[static_cast<std::size_t>(t.row)]++] = {t.col, t.value};

  std::vector<std::size_t> row_ptr(nrows + 1, 0);
  std::vector<index_t> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  for (std::size_t i = 0; i < nrows; ++i) {
    auto first = bucket.begin() + static_cast<std::ptrdiff_t>(counts[i]);
    auto last = bucket.begin() + static_cast<std::ptrdiff_t>(counts[i + 1]);
    std::stable_sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!cols.empty() && vals.size() > row_ptr[i] && cols.back() == it->first)
        vals.back() += it->second;
      else {
        cols.push_back(it->first);
        vals.push_back(it->second);
      }
    }
    row_ptr[i + 1] = vals.size();
  }
  return SparseMatrixCSR(nrows, ncols, std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrixCSR SparseMatrixCSR::identity(std::size_t n) {
  std::vector<std::size_t> row_ptr(n + 1);
  std::vector<index_t> cols(n);
  std::iota(row_ptr.begin(), row_ptr.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), index_t{0});
  return SparseMatrixCSR(n, n, std::move(row_ptr), std::move(cols), std::vector<double>(n, 1.0));
}

SparseMatrixCSR SparseMatrixCSR::from_dense(const DenseMatrix& dense) {
  std::vector<std::size_t> row_ptr(dense.rows() + 1, 0);
  std::vector<index_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < dense.rows(); ++i) {
    for (std::size_t j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) == 0.0) continue;
      cols.push_back(static_cast<index_t>(j));
      vals.push_back(dense(i, j));
    }
    row_ptr[i + 1] = vals.size();
  }
  return SparseMatrixCSR(dense.rows(), dense.cols(), std::move(row_ptr), std::move(cols), std::move(vals));
}

SparseMatrixCSR SparseMatrixCSR::transpose() const {
  std::vector<std::size_t> row_ptr(ncols_ + 1, 0);
  for (index_t c : col_idx_) ++row_ptr[static_cast<std::size_t>(c) + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<std::size_t> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<index_t> cols(nnz());
  std::vector<double> vals(nnz());
  // rows visited in order, so each transposed row comes out sorted
  for (std::size_t i = 0; i < nrows_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = next[static_cast<std::size_t>(col_idx_[k])]++;
      cols[dst] = static_cast<index_t>(i);
      vals[dst] = values_[k];
    }
  }
  return SparseMatrixCSR(ncols_, nrows_, std::move(row_ptr), std::move(cols), std::move(vals));
}

std::vector<Triplet> SparseMatrixCSR::to_triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      out.push_back({static_cast<index_t>(i), col_idx_[k], values_[k]});
  return out;
}

DenseMatrix SparseMatrixCSR::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) d(i, static_cast<std::size_t>(col_idx_[k])) = values_[k];
  return d;
}

double SparseMatrixCSR::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s);
}

void matvec(const SparseMatrixCSR& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.ncols() || y.size() != a.nrows()) throw StructuralError("matvec: dimension mismatch");
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    double s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += va[k] * x[static_cast<std::size_t>(ci[k])];
    y[i] = s;
  }
}

Vector matvec(const SparseMatrixCSR& a, std::span<const double> x) {
  Vector y(a.nrows());
  matvec(a, x, y);
  return y;
}

void matvec_transpose(const SparseMatrixCSR& a, std::span<const double> x, std::span<double> y) {
  if (x.size() != a.nrows() || y.size() != a.ncols()) throw StructuralError("matvec_transpose: dimension mismatch");
  std::fill(y.begin(), y.end(), 0.0);
  const auto rp = a.row_ptr();
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) y[static_cast<std::size_t>(ci[k])] += va[k] * xi;
  }
}

Vector matvec_transpose(const SparseMatrixCSR& a, std::span<const double> x) {
  Vector y(a.ncols());
  matvec_transpose(a, x, y);
  return y;
}

Vector column_sq_norms(const SparseMatrixCSR& a) {
  Vector out(a.ncols(), 0.0);
  const auto ci = a.col_idx();
  const auto va = a.values();
  for (std::size_t k = 0; k < a.nnz(); ++k) out[static_cast<std::size_t>(ci[k])] += va[k] * va[k];
  return out;
}

CompactResult compact(const SparseMatrixCSR& a) {
  std::vector<bool> row_live(a.nrows(), false), col_live(a.ncols(), false);
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (vals[k] == 0.0) continue;
      row_live[i] = true;
      col_live[static_cast<std::size_t>(cols[k])] = true;
    }
  }
  CompactResult out;
  std::vector<index_t> new_col(a.ncols(), -1);
  for (std::size_t i = 0; i < a.nrows(); ++i)
    if (row_live[i]) out.row_map.push_back(i);
  for (std::size_t j = 0; j < a.ncols(); ++j)
    if (col_live[j]) {
      new_col[j] = static_cast<index_t>(out.col_map.size());
      out.col_map.push_back(j);
    }
  if (out.row_map.empty()) throw DegenerateInputError("compact: matrix has no nonzero entries");
  out.removed_rows = a.nrows() - out.row_map.size();
  out.removed_cols = a.ncols() - out.col_map.size();

  std::vector<std::size_t> row_ptr(out.row_map.size() + 1, 0);
  std::vector<index_t> cols;
  std::vector<double> vals;
  for (std::size_t r = 0; r < out.row_map.size(); ++r) {
    const std::size_t i = out.row_map[r];
    const auto rc = a.row_cols(i);
    const auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      if (rv[k] == 0.0) continue;
      cols.push_back(new_col[static_cast<std::size_t>(rc[k])]);
      vals.push_back(rv[k]);
    }
    row_ptr[r + 1] = vals.size();
  }
  out.matrix = SparseMatrixCSR(out.row_map.size(), out.col_map.size(), std::move(row_ptr), std::move(cols), std::move(vals));
  return out;
}

}  // namespace rrk
