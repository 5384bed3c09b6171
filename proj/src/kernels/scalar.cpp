#include "crnet/kernels.hpp"

namespace crnet::kernels::detail {

void add_scaled_scalar(double* dst, const double* src, const double* vec, double scalar,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double prod = scalar * vec[i];
    dst[i] = src[i] + prod;
  }
}

}  // namespace crnet::kernels::detail
