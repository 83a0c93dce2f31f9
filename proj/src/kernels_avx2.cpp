// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed CPU support.
#include <immintrin.h>

#include "rrk/kernels.hpp"

namespace rrk::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd(), a3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), a1);
    a2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), a2);
    a3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), a3);
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), a0);
  double s = hsum(_mm256_add_pd(_mm256_add_pd(a0, a1), _mm256_add_pd(a2, a3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    _mm256_storeu_pd(y + i + 4, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4)));
  }
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double sparse_dot_avx2(const double* values, const index_t* cols, std::size_t nnz, const double* x) {
  __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= nnz; k += 8) {
    __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
    __m128i i1 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k + 4));
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), _mm256_i32gather_pd(x, i0, 8), a0);
    a1 = _mm256_fmadd_pd(_mm256_loadu_pd(values + k + 4), _mm256_i32gather_pd(x, i1, 8), a1);
  }
  for (; k + 4 <= nnz; k += 4) {
    __m128i i0 = _mm_loadu_si128(reinterpret_cast<const __m128i*>(cols + k));
    a0 = _mm256_fmadd_pd(_mm256_loadu_pd(values + k), _mm256_i32gather_pd(x, i0, 8), a0);
  }
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; k < nnz; ++k) s += values[k] * x[cols[k]];
  return s;
}

// AVX2 has no scatter; the update stays scalar but uses fused multiply-add.
void sparse_axpy_avx2(double alpha, const double* values, const index_t* cols, std::size_t nnz, double* x) {
  for (std::size_t k = 0; k < nnz; ++k) x[cols[k]] = __builtin_fma(alpha, values[k], x[cols[k]]);
}

constexpr KernelTable kAvx2{"avx2", dot_avx2, axpy_avx2, sparse_dot_avx2, sparse_axpy_avx2};

}  // namespace

const KernelTable* avx2_table_unchecked() noexcept { return &kAvx2; }

}  // namespace rrk::kernels
