#include <doctest.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <random>
#include <sstream>

#include "crnet/errors.hpp"
#include "crnet/fast_product.hpp"

using namespace crnet;

namespace {

ReductionSchedule random_schedule(std::size_t s, unsigned m, std::mt19937_64& gen) {
  std::vector<unsigned> w(s, 0);
  for (std::size_t j = 1; j < s; ++j)
    w[j] = std::min<unsigned>(m + 1, w[j - 1] + static_cast<unsigned>(gen() % 3 == 0));
  return ReductionSchedule(std::move(w));
}

// |fast - standard| against the sum of absolute terms phi(x_kj) |a_jc|, which
// bounds the rounding of any summation order.
double scaled_error(const PointBlock& pts, const RealMatrix& a, const TransformSpec& spec,
                    const RealMatrix& fast, const RealMatrix& slow) {
  const PointTransform phi(spec, pts.base(), pts.m());
  double worst = 0.0;
  for (std::size_t k = 0; k < pts.rows(); ++k)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      double mag = 0.0;
      for (std::size_t j = 0; j < pts.s(); ++j) mag += std::abs(phi(pts(k, j)) * a(j, c));
      const double d = std::abs(fast(k, c) - slow(k, c));
      if (d > 0) worst = std::max(worst, d / mag);
    }
  return worst;
}

}  // namespace

TEST_CASE("standard_product examples") {
  const auto pts = generate_points(pascal_net(2, 2, 2));
  const auto p = standard_product(pts, RealMatrix(2, 1, std::vector<double>{1, 1}));
  CHECK(p == RealMatrix(4, 1, std::vector<double>{0, 1, 1, 1}));

  const auto big = generate_points(random_net(3, 3, 4, 2));
  const auto id = standard_product(big, identity_matrix(4));
  for (std::size_t k = 0; k < big.rows(); ++k)
    for (std::size_t j = 0; j < 4; ++j) CHECK(id(k, j) == big.value(k, j));
  CHECK(standard_product(big, RealMatrix(4, 3)) == RealMatrix(27, 3));

  CHECK_THROWS_AS(standard_product(big, RealMatrix(3, 3)), InvalidArgument);
  RealMatrix bad(4, 1);
  bad(2, 0) = std::nan("");
  CHECK_THROWS_AS(standard_product(big, bad), InvalidArgument);
}

TEST_CASE("fast product matches the standard product") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t b = trial % 3 == 0 ? 3 : 2;
    const unsigned m = 1 + static_cast<unsigned>(gen() % (b == 2 ? 9 : 5));
    const std::size_t s = 1 + gen() % 20;
    const std::size_t tau = 1 + gen() % 5;
    const auto sched = random_schedule(s, m, gen);
    const auto net = column_reduce(random_net(b, m, s, gen()), sched);
    const auto a = random_matrix(s, tau, gen());
    const auto pts = generate_points(net);
    for (const auto& spec : {TransformSpec::identity(), TransformSpec::inverse_normal()}) {
      const auto fast = fast_reduced_product(net, sched, a, spec);
      const auto slow = standard_product(pts, a, spec);
      CHECK(scaled_error(pts, a, spec, fast, slow) <= 1e-14);
    }
  }
}

TEST_CASE("fast product degenerate schedules") {
  const auto a1 = random_matrix(1, 3, 5);
  const auto one = random_net(2, 6, 1, 3);
  CHECK(fast_reduced_product(one, ReductionSchedule({0}), a1) ==
        standard_product(generate_points(one), a1));

  const unsigned m = 5;
  const ReductionSchedule w({0, m, m, m});
  const auto net = column_reduce(random_net(2, m, 4, 8), w);
  const auto a = random_matrix(4, 2, 6);
  const auto p = fast_reduced_product(net, w, a);
  const auto x1 = generate_points(net).column(0);
  for (std::size_t k = 0; k < x1.size(); ++k)
    for (std::size_t c = 0; c < 2; ++c) CHECK(p(k, c) == static_cast<double>(x1[k]) / 32.0 * a(0, c));

  // s* = 0: every row is the constant sum of phi(0) a_j.
  const ReductionSchedule all({0, 0});
  const auto zero = column_reduce(pascal_net(2, 3, 2), ReductionSchedule({0, 3}));
  CHECK_THROWS_AS(fast_reduced_product(pascal_net(2, 3, 2), ReductionSchedule({0, 1}), a1),
                  InvalidArgument);
  const auto inv = TransformSpec::inverse_normal();
  const auto a2 = random_matrix(2, 2, 1);
  CHECK(scaled_error(generate_points(zero), a2, inv,
                     fast_reduced_product(zero, ReductionSchedule({0, 3}), a2, inv),
                     standard_product(generate_points(zero), a2, inv)) <= 1e-14);
  CHECK_THROWS_AS(fast_reduced_product(zero, all, random_matrix(3, 1, 1)), InvalidArgument);
}

TEST_CASE("identity A reproduces the reduced points") {
  const ReductionSchedule w({0, 1, 2, 2, 9});
  const auto net = column_reduce(random_net(2, 7, 5, 4), w);
  const auto p = fast_reduced_product(net, w, identity_matrix(5));
  const auto pts = generate_points(net);
  for (std::size_t k = 0; k < pts.rows(); ++k)
    for (std::size_t j = 0; j < 5; ++j) CHECK(p(k, j) == pts.value(k, j));
}

TEST_CASE("thread count does not change the output") {
  const ReductionSchedule w({0, 1, 1, 2, 3, 3, 4});
  const auto net = column_reduce(random_net(2, 9, 7, 2), w);
  const auto a = random_matrix(7, 11, 3);
  const auto pts = generate_points(net);
  const auto base = fast_reduced_product(net, w, a);
  const auto base_std = standard_product(pts, a);
  for (unsigned th : {2u, 3u, 7u, 16u}) {
    CHECK(fast_reduced_product(net, w, a, {}, {th}) == base);
    CHECK(standard_product(pts, a, {}, {th}) == base_std);
  }
}

TEST_CASE("op_count_model") {
  std::vector<unsigned> w(800);
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j] = std::min<unsigned>(static_cast<unsigned>(std::bit_width(j + 1) - 1), 12);
  const auto ops = op_count_model(2, 12, w, 20);
  CHECK(ops.standard == 4096ull * 800 * 20);
  CHECK(ops.point_gen == 4096ull * 800 * 144);
  CHECK(static_cast<double>(ops.fast) / static_cast<double>(ops.standard) < 0.15);

  const std::vector<unsigned> none(10, 0);
  const auto flat = op_count_model(2, 6, none, 3);
  CHECK(flat.fast == 10ull * 64 * (3 + 36));
  CHECK(flat.fast == flat.standard + flat.point_gen);

  const std::vector<unsigned> gone{7, 7, 9};
  CHECK(op_count_model(2, 7, gone, 4).fast == 0);

  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<unsigned> v(6);
    for (auto& x : v) x = static_cast<unsigned>(gen() % 10);
    const auto before = op_count_model(3, 8, v, 5).fast;
    v[gen() % 6] += 1;
    CHECK(op_count_model(3, 8, v, 5).fast <= before);
  }
  CHECK_THROWS_AS(op_count_model(2, 63, none, 1000), InvalidArgument);
}

TEST_CASE("qmc_estimate") {
  const auto net = pascal_net(2, 4, 2);
  const auto none = ReductionSchedule::none(2);
  const RealMatrix e1(2, 1, std::vector<double>{1, 0});
  auto first = [](std::span<const double> y) { return y[0]; };
  CHECK(qmc_estimate(net, none, e1, {}, first) == 15.0 / 32.0);
  CHECK(qmc_estimate(net, none, e1, TransformSpec::inverse_normal(),
                     [](std::span<const double>) { return 2.5; }) == 2.5);

  const auto big = pascal_net(2, 10, 8);
  const RealMatrix avg(8, 1, 1.0 / 8.0);
  const double est = qmc_estimate(big, ReductionSchedule::none(8), avg, {}, first);
  CHECK(std::abs(est - (0.5 - 1.0 / 2048.0)) < 1e-12);
}

TEST_CASE("inverse normal CDF") {
  const boost::math::normal_distribution<double> nd;
  for (double p : {1e-12, 1e-8, 1e-4, 0.01, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999, 1 - 1e-9}) {
    const double ref = boost::math::quantile(nd, p);
    CHECK(std::abs(inverse_normal_cdf(p) - ref) <= 1.2e-9 * std::max(1.0, std::abs(ref)));
  }
  CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), InvalidArgument);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), InvalidArgument);

  const PointTransform phi(TransformSpec::inverse_normal(), 2, 3);
  CHECK(phi(0) == inverse_normal_cdf(1.0 / 16.0));
  CHECK(phi(4) == inverse_normal_cdf(0.5 + 1.0 / 16.0));
  const PointTransform shifted(TransformSpec::inverse_normal(0.01), 2, 3);
  CHECK(shifted(0) == inverse_normal_cdf(0.01));
  CHECK_THROWS_AS(PointTransform(TransformSpec::inverse_normal(0.2), 2, 3), InvalidArgument);

  const PointTransform tab(TransformSpec::table({1, 2, 3, 4}), 2, 2);
  CHECK(tab(2) == 3);
  CHECK_THROWS_AS(PointTransform(TransformSpec::table({1, 2}), 2, 2), InvalidArgument);
}

TEST_CASE("matrix formats") {
  const auto a = random_matrix(3, 4, 12);
  std::stringstream csv;
  write_matrix_csv(csv, a);
  CHECK(read_matrix_csv(csv) == a);

  std::stringstream bin;
  write_matrix_binary(bin, a);
  CHECK(bin.str().size() == 16 + 12 * 8);
  CHECK(read_matrix_binary(bin) == a);

  std::istringstream with_header("a,b\n1,2\n3.5,-4e-3\n");
  CHECK(read_matrix_csv(with_header) == RealMatrix(2, 2, std::vector<double>{1, 2, 3.5, -4e-3}));
  std::istringstream ragged("1,2\n3\n");
  CHECK_THROWS_AS(read_matrix_csv(ragged), ParseError);
  std::istringstream junk("1,2\n3,x\n");
  CHECK_THROWS_AS(read_matrix_csv(junk), ParseError);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_matrix_csv(empty), ParseError);
}

TEST_CASE("random_matrix") {
  const auto a = random_matrix(5, 5, 42);
  CHECK(a == random_matrix(5, 5, 42));
  CHECK_FALSE(a == random_matrix(5, 5, 43));
  std::mt19937_64 gen(42);
  const double u = static_cast<double>(gen() >> 11) * 0x1p-53;
  CHECK(a(0, 0) == -1.0 + 2.0 * u);
  for (double x : a.entries()) CHECK((x >= -1.0 && x < 1.0));
}
