// Built with -mavx2 -mfma; only reached through the dispatch table after a
// CPUID check.

#include <immintrin.h>

#include "layersep/kernels.hpp"

namespace layersep::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// Reduces four accumulators to one vector {hsum(v0), .., hsum(v3)}.
inline __m256d hsum4(__m256d v0, __m256d v1, __m256d v2, __m256d v3) {
  const __m256d s01 = _mm256_hadd_pd(v0, v1);  // v0[0]+v0[1], v1[0]+v1[1], v0[2]+v0[3], v1[2]+v1[3]
  const __m256d s23 = _mm256_hadd_pd(v2, v3);
  const __m256d lo = _mm256_permute2f128_pd(s01, s23, 0x20);
  const __m256d hi = _mm256_permute2f128_pd(s01, s23, 0x31);
  return _mm256_add_pd(lo, hi);
}

inline double dot1(const double* x, const double* y, std::size_t dim) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= dim; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4),
                           _mm256_loadu_pd(y + k + 4), acc1);
  }
  for (; k + 4 <= dim; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < dim; ++k) s += x[k] * y[k];
  return s;
}

// 2 query rows x 4 candidate rows; eight independent accumulators cover the
// FMA latency.
inline void dot_2x4(const double* a, const double* b, std::size_t dim,
                    std::size_t stride, double* out, std::size_t out_stride) {
  const double* a0 = a;
  const double* a1 = a + stride;
  const double* b0 = b;
  const double* b1 = b + stride;
  const double* b2 = b + 2 * stride;
  const double* b3 = b + 3 * stride;
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c02 = _mm256_setzero_pd(), c03 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c12 = _mm256_setzero_pd(), c13 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= dim; k += 4) {
    const __m256d x0 = _mm256_loadu_pd(a0 + k);
    const __m256d x1 = _mm256_loadu_pd(a1 + k);
    __m256d y = _mm256_loadu_pd(b0 + k);
    c00 = _mm256_fmadd_pd(x0, y, c00);
    c10 = _mm256_fmadd_pd(x1, y, c10);
    y = _mm256_loadu_pd(b1 + k);
    c01 = _mm256_fmadd_pd(x0, y, c01);
    c11 = _mm256_fmadd_pd(x1, y, c11);
    y = _mm256_loadu_pd(b2 + k);
    c02 = _mm256_fmadd_pd(x0, y, c02);
    c12 = _mm256_fmadd_pd(x1, y, c12);
    y = _mm256_loadu_pd(b3 + k);
    c03 = _mm256_fmadd_pd(x0, y, c03);
    c13 = _mm256_fmadd_pd(x1, y, c13);
  }
  alignas(32) double r0[4];
  alignas(32) double r1[4];
  _mm256_store_pd(r0, hsum4(c00, c01, c02, c03));
  _mm256_store_pd(r1, hsum4(c10, c11, c12, c13));
  for (; k < dim; ++k) {
    r0[0] += a0[k] * b0[k];
    r0[1] += a0[k] * b1[k];
    r0[2] += a0[k] * b2[k];
    r0[3] += a0[k] * b3[k];
    r1[0] += a1[k] * b0[k];
    r1[1] += a1[k] * b1[k];
    r1[2] += a1[k] * b2[k];
    r1[3] += a1[k] * b3[k];
  }
  for (int c = 0; c < 4; ++c) {
    out[c] = r0[c];
    out[out_stride + c] = r1[c];
  }
}

}  // namespace

void row_norms(const double* x, std::size_t rows, std::size_t dim,
               std::size_t stride, double* out) {
  for (std::size_t i = 0; i < rows; ++i) {
    const double* r = x + i * stride;
    out[i] = dot1(r, r, dim);
  }
}

void dot_tile(const double* a, std::size_t qa, const double* b, std::size_t cb,
              std::size_t dim, std::size_t stride, double* out,
              std::size_t out_stride) {
  const std::size_t q_main = qa - qa % 2;
  const std::size_t c_main = cb - cb % 4;
  for (std::size_t q = 0; q < q_main; q += 2) {
    for (std::size_t c = 0; c < c_main; c += 4) {
      dot_2x4(a + q * stride, b + c * stride, dim, stride,
              out + q * out_stride + c, out_stride);
    }
    for (std::size_t c = c_main; c < cb; ++c) {
      out[q * out_stride + c] = dot1(a + q * stride, b + c * stride, dim);
      out[(q + 1) * out_stride + c] =
          dot1(a + (q + 1) * stride, b + c * stride, dim);
    }
  }
  for (std::size_t q = q_main; q < qa; ++q) {
    for (std::size_t c = 0; c < cb; ++c) {
      out[q * out_stride + c] = dot1(a + q * stride, b + c * stride, dim);
    }
  }
}

}  // namespace layersep::kernels::avx2
