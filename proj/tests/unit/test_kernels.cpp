#include <doctest.h>

#include <random>

#include "crnet/errors.hpp"
#include "crnet/fast_product.hpp"
#include "crnet/kernels.hpp"

using namespace crnet;

namespace {

struct RestoreBackend {
  kernels::Backend saved = kernels::active().backend;
  ~RestoreBackend() { kernels::set_active(saved); }
};

}  // namespace

TEST_CASE("backend names") {
  for (auto b : {kernels::Backend::scalar, kernels::Backend::avx2, kernels::Backend::neon}) {
    kernels::Backend back{};
    CHECK(kernels::parse_backend(kernels::name(b), back));
    CHECK(back == b);
  }
  kernels::Backend out{};
  CHECK_FALSE(kernels::parse_backend("sse9", out));
  CHECK(kernels::available(kernels::Backend::scalar));
  if (!kernels::available(kernels::Backend::neon))
    CHECK_THROWS_AS(kernels::table(kernels::Backend::neon), InvalidArgument);
}

TEST_CASE("every backend matches the scalar kernel bitwise") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> dist(-1e3, 1e3);
  const auto& ref = kernels::table(kernels::Backend::scalar);
  for (auto backend : kernels::available_backends()) {
    const auto& k = kernels::table(backend);
    for (std::size_t n = 0; n < 70; ++n) {
      std::vector<double> src(n), vec(n);
      for (auto& x : src) x = dist(gen);
      for (auto& x : vec) x = dist(gen);
      const double c = dist(gen);
      std::vector<double> expect(n), got(n);
      ref.add_scaled(expect.data(), src.data(), vec.data(), c, n);
      k.add_scaled(got.data(), src.data(), vec.data(), c, n);
      CHECK(got == expect);
      k.add_scaled(src.data(), src.data(), vec.data(), c, n);
      CHECK(src == expect);
    }
  }
}

TEST_CASE("products are identical across backends") {
  RestoreBackend restore;
  const ReductionSchedule w({0, 1, 2, 2, 3, 5});
  const auto net = column_reduce(random_net(2, 10, 6, 7), w);
  const auto a = random_matrix(6, 9, 8);
  const auto pts = generate_points(net);
  kernels::set_active(kernels::Backend::scalar);
  const auto fast = fast_reduced_product(net, w, a, TransformSpec::inverse_normal());
  const auto slow = standard_product(pts, a, TransformSpec::inverse_normal());
  for (auto backend : kernels::available_backends()) {
    kernels::set_active(backend);
    CHECK(fast_reduced_product(net, w, a, TransformSpec::inverse_normal()) == fast);
    CHECK(standard_product(pts, a, TransformSpec::inverse_normal()) == slow);
  }
}
