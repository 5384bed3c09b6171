// Built with -mavx2; callers reach this only after a runtime CPU check.
#include <immintrin.h>

#include "crnet/kernels.hpp"

namespace crnet::kernels::detail {

void add_scaled_avx2(double* dst, const double* src, const double* vec, double scalar,
                     std::size_t n) {
  const __m256d s = _mm256_set1_pd(scalar);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m256d p0 = _mm256_mul_pd(s, _mm256_loadu_pd(vec + i));
    __m256d p1 = _mm256_mul_pd(s, _mm256_loadu_pd(vec + i + 4));
    __m256d p2 = _mm256_mul_pd(s, _mm256_loadu_pd(vec + i + 8));
    __m256d p3 = _mm256_mul_pd(s, _mm256_loadu_pd(vec + i + 12));
    p0 = _mm256_add_pd(_mm256_loadu_pd(src + i), p0);
    p1 = _mm256_add_pd(_mm256_loadu_pd(src + i + 4), p1);
    p2 = _mm256_add_pd(_mm256_loadu_pd(src + i + 8), p2);
    p3 = _mm256_add_pd(_mm256_loadu_pd(src + i + 12), p3);
    _mm256_storeu_pd(dst + i, p0);
    _mm256_storeu_pd(dst + i + 4, p1);
    _mm256_storeu_pd(dst + i + 8, p2);
    _mm256_storeu_pd(dst + i + 12, p3);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p = _mm256_mul_pd(s, _mm256_loadu_pd(vec + i));
    _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(src + i), p));
  }
  for (; i < n; ++i) {
    const double prod = scalar * vec[i];
    dst[i] = src[i] + prod;
  }
}

}  // namespace crnet::kernels::detail
