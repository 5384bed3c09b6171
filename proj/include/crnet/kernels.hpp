#pragma once

// Arithmetic inner loops shared by the matrix products.
//
// Every backend performs exactly one IEEE multiply and one IEEE add per
// element (no fused multiply-add), so all backends produce bitwise identical
// results. The scalar backend is the reference; the vector backends are
// selected at runtime from what the CPU supports.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace crnet::kernels {

enum class Backend { scalar, avx2, neon };

/// dst[i] = src[i] + scalar * vec[i] for i < n. dst may equal src exactly;
/// any other overlap is undefined.
using AddScaledFn = void (*)(double* dst, const double* src, const double* vec, double scalar,
                             std::size_t n);

struct KernelTable {
  Backend backend;
  AddScaledFn add_scaled;
};

std::string_view name(Backend b);
bool parse_backend(std::string_view text, Backend& out);

/// True when the backend was compiled in and the running CPU supports it.
bool available(Backend b);
std::vector<Backend> available_backends();

/// Kernel table for a given backend; throws InvalidArgument if unavailable.
const KernelTable& table(Backend b);

/// The table used by the library. Initialised on first use to the best
/// available backend, or to the one named by the CRNET_SIMD environment
/// variable (scalar, avx2, neon).
const KernelTable& active();
void set_active(Backend b);

inline void add_scaled(std::span<double> dst, std::span<const double> src,
                       std::span<const double> vec, double scalar) {
  active().add_scaled(dst.data(), src.data(), vec.data(), scalar, dst.size());
}

namespace detail {
void add_scaled_scalar(double* dst, const double* src, const double* vec, double scalar,
                       std::size_t n);
#if defined(CRNET_BUILD_AVX2)
void add_scaled_avx2(double* dst, const double* src, const double* vec, double scalar,
                     std::size_t n);
#endif
#if defined(CRNET_BUILD_NEON)
void add_scaled_neon(double* dst, const double* src, const double* vec, double scalar,
                     std::size_t n);
#endif
}  // namespace detail

}  // namespace crnet::kernels
