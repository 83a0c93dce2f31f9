#pragma once

// Level-1 kernels used by the Krylov and NR-SSOR inner loops.
//
// Every kernel has a scalar reference implementation. When the library is
// built with AVX2 support and the running CPU reports avx2+fma, the vector
// variants are selected once at first use. Set RRK_KERNELS=scalar in the
// environment to force the reference path.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace rrk {

using index_t = std::int32_t;

namespace kernels {

struct KernelTable {
  std::string_view name;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // sum_k values[k] * x[cols[k]]
  double (*sparse_dot)(const double* values, const index_t* cols, std::size_t nnz, const double* x);
  // x[cols[k]] += alpha * values[k]
  void (*sparse_axpy)(double alpha, const double* values, const index_t* cols, std::size_t nnz, double* x);
};

const KernelTable& scalar_table() noexcept;

/// The AVX2 table, or nullptr when not compiled in or unsupported by this CPU.
const KernelTable* avx2_table() noexcept;

/// Table chosen for this process (fixed after the first call).
const KernelTable& active() noexcept;

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double nrm2(std::span<const double> x);
void scale(double alpha, std::span<double> x) noexcept;
double sparse_dot(std::span<const double> values, std::span<const index_t> cols, std::span<const double> x);
void sparse_axpy(double alpha, std::span<const double> values, std::span<const index_t> cols, std::span<double> x);

}  // namespace kernels
}  // namespace rrk
