#include <arm_neon.h>

#include "crnet/kernels.hpp"

namespace crnet::kernels::detail {

// vmulq/vaddq kept separate: vfmaq would round differently from the scalar path.
void add_scaled_neon(double* dst, const double* src, const double* vec, double scalar,
                     std::size_t n) {
  const float64x2_t s = vdupq_n_f64(scalar);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    float64x2_t p0 = vmulq_f64(s, vld1q_f64(vec + i));
    float64x2_t p1 = vmulq_f64(s, vld1q_f64(vec + i + 2));
    float64x2_t p2 = vmulq_f64(s, vld1q_f64(vec + i + 4));
    float64x2_t p3 = vmulq_f64(s, vld1q_f64(vec + i + 6));
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(src + i), p0));
    vst1q_f64(dst + i + 2, vaddq_f64(vld1q_f64(src + i + 2), p1));
    vst1q_f64(dst + i + 4, vaddq_f64(vld1q_f64(src + i + 4), p2));
    vst1q_f64(dst + i + 6, vaddq_f64(vld1q_f64(src + i + 6), p3));
  }
  for (; i + 2 <= n; i += 2) {
    const float64x2_t p = vmulq_f64(s, vld1q_f64(vec + i));
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(src + i), p));
  }
  for (; i < n; ++i) {
    const double prod = scalar * vec[i];
    dst[i] = src[i] + prod;
  }
}

}  // namespace crnet::kernels::detail
