#include <atomic>
#include <cstdlib>

#include "crnet/errors.hpp"
#include "crnet/kernels.hpp"

namespace crnet::kernels {
namespace {

constexpr KernelTable kScalar{Backend::scalar, &detail::add_scaled_scalar};
#if defined(CRNET_BUILD_AVX2)
constexpr KernelTable kAvx2{Backend::avx2, &detail::add_scaled_avx2};
#endif
#if defined(CRNET_BUILD_NEON)
constexpr KernelTable kNeon{Backend::neon, &detail::add_scaled_neon};
#endif

bool cpu_supports(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(CRNET_BUILD_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(CRNET_BUILD_NEON)
      return true;  // mandatory on AArch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* pick_initial() {
  if (const char* env = std::getenv("CRNET_SIMD")) {
    Backend b;
    if (parse_backend(env, b) && available(b)) return &table(b);
  }
  const auto all = available_backends();
  return &table(all.back());
}

std::atomic<const KernelTable*>& active_slot() {
  static std::atomic<const KernelTable*> slot{pick_initial()};
  return slot;
}

}  // namespace

std::string_view name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
  }
  return "unknown";
}

bool parse_backend(std::string_view text, Backend& out) {
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
    if (text == name(b)) {
      out = b;
      return true;
    }
  }
  return false;
}

bool available(Backend b) { return cpu_supports(b); }

std::vector<Backend> available_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon})
    if (available(b)) out.push_back(b);
  return out;
}

const KernelTable& table(Backend b) {
  if (!available(b))
    throw InvalidArgument("kernel backend '" + std::string(name(b)) + "' is not available");
  switch (b) {
#if defined(CRNET_BUILD_AVX2)
    case Backend::avx2: return kAvx2;
#endif
#if defined(CRNET_BUILD_NEON)
    case Backend::neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() { return *active_slot().load(std::memory_order_relaxed); }

void set_active(Backend b) { active_slot().store(&table(b), std::memory_order_relaxed); }

}  // namespace crnet::kernels
