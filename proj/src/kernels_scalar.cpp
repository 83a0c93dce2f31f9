#include "rrk/kernels.hpp"

namespace rrk::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sparse_dot_scalar(const double* values, const index_t* cols, std::size_t nnz, const double* x) {
  double s = 0.0;
  for (std::size_t k = 0; k < nnz; ++k) s += values[k] * x[cols[k]];
  return s;
}

void sparse_axpy_scalar(double alpha, const double* values, const index_t* cols, std::size_t nnz, double* x) {
  for (std::size_t k = 0; k < nnz; ++k) x[cols[k]] += alpha * values[k];
}

constexpr KernelTable kScalar{"scalar", dot_scalar, axpy_scalar, sparse_dot_scalar, sparse_axpy_scalar};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace rrk::kernels
