#include <cmath>
#include <cstdlib>
#include <cstring>

#include "rrk/errors.hpp"
#include "rrk/kernels.hpp"

namespace rrk::kernels {

#ifdef RRK_HAVE_AVX2
const KernelTable* avx2_table_unchecked() noexcept;
#endif

const KernelTable* avx2_table() noexcept {
#ifdef RRK_HAVE_AVX2
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? avx2_table_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

namespace {

const KernelTable& select() noexcept {
  const char* forced = std::getenv("RRK_KERNELS");
  if (forced && std::strcmp(forced, "scalar") == 0) return scalar_table();
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() noexcept {
  static const KernelTable& table = select();
  return table;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw StructuralError("dot: length mismatch");
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw StructuralError("axpy: length mismatch");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double nrm2(std::span<const double> x) { return std::sqrt(active().dot(x.data(), x.data(), x.size())); }

void scale(double alpha, std::span<double> x) noexcept {
  for (double& v : x) v *= alpha;
}

double sparse_dot(std::span<const double> values, std::span<const index_t> cols, std::span<const double> x) {
  if (values.size() != cols.size()) throw StructuralError("sparse_dot: length mismatch");
  return active().sparse_dot(values.data(), cols.data(), values.size(), x.data());
}

void sparse_axpy(double alpha, std::span<const double> values, std::span<const index_t> cols, std::span<double> x) {
  if (values.size() != cols.size()) throw StructuralError("sparse_axpy: length mismatch");
  active().sparse_axpy(alpha, values.data(), cols.data(), values.size(), x.data());
}

}  // namespace rrk::kernels
