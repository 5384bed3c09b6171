#include <doctest.h>

#include <random>
#include <sstream>

#include "../oracles.hpp"
#include "crnet/errors.hpp"
#include "crnet/net.hpp"

using namespace crnet;

namespace {

FieldMatrix sobol_c2() {
  return FieldMatrix::from_rows(2, {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 1}});
}

}  // namespace

TEST_CASE("pascal_net matrices") {
  const auto net = pascal_net(2, 4, 2);
  CHECK(net.matrix(0) == FieldMatrix::identity(2, 4));
  CHECK(net.matrix(1) == sobol_c2());
  CHECK(net.declared_t() == 0u);
  CHECK(net.provenance() == Provenance::pascal);

  const auto tiny = pascal_net(2, 1, 2);
  CHECK(tiny.matrix(0) == FieldMatrix::from_rows(2, {{1}}));
  CHECK(tiny.matrix(1) == FieldMatrix::from_rows(2, {{1}}));

  CHECK(pascal_net(2, 3, 2).matrix(1) == FieldMatrix::from_rows(2, {{1, 1, 1}, {0, 1, 0}, {0, 0, 1}}));
  CHECK_FALSE(pascal_net(2, 4, 3).declared_t().has_value());
  CHECK_THROWS_AS(pascal_net(2, 0, 2), InvalidArgument);
}

TEST_CASE("pascal matrix entries match Lucas' theorem") {
  for (std::uint32_t b : {2u, 3u, 5u, 7u}) {
    const auto p = pascal_matrix(b, 12);
    for (unsigned i = 0; i < 12; ++i)
      for (unsigned r = 0; r < 12; ++r) CHECK(p(i, r) == oracle::lucas_binom(r, i, b));
  }
}

TEST_CASE("higher pascal coordinates are powers of the pascal matrix") {
  const auto net = pascal_net(3, 5, 4);
  const auto p = pascal_matrix(3, 5);
  CHECK(net.matrix(2) == multiply(p, p));
  CHECK(net.matrix(3) == multiply(multiply(p, p), p));
}

TEST_CASE("random_net is deterministic and seed dependent") {
  CHECK(random_net(3, 5, 4, 99).same_matrices(random_net(3, 5, 4, 99)));
  const auto big = random_net(2, 12, 800, 1);
  CHECK(big.s() == 800);
  for (const auto& c : big.matrices()) {
    CHECK(c.rows() == 12);
    CHECK(c.cols() == 12);
  }
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    CHECK_FALSE(random_net(2, 8, 3, seed).same_matrices(random_net(2, 8, 3, seed + 1000)));
  CHECK(random_net(2, 4, 2, 7).seed() == 7u);
}

TEST_CASE("random digits are close to uniform") {
  const auto net = random_net(5, 10, 200, 3);
  std::vector<std::size_t> counts(5, 0);
  for (const auto& c : net.matrices())
    for (auto d : c.entries()) ++counts[d];
  for (auto c : counts) CHECK(std::abs(static_cast<double>(c) / 20000.0 - 0.2) < 0.01);
}

TEST_CASE("column and row reduction") {
  const auto net = pascal_net(2, 4, 2);
  const ReductionSchedule w({0, 1});
  CHECK(column_reduce(net, w).matrix(1) ==
        FieldMatrix::from_rows(2, {{1, 1, 1, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 0}}));
  CHECK(row_reduce(net, w).matrix(1) ==
        FieldMatrix::from_rows(2, {{1, 1, 1, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {0, 0, 0, 0}}));
  CHECK(column_reduce(net, ReductionSchedule::none(2)).same_matrices(net));
  CHECK(row_reduce(net, ReductionSchedule::none(2)).same_matrices(net));
  CHECK(column_reduce(net, ReductionSchedule({0, 7})).matrix(1).is_zero());
  CHECK(row_reduce(net, ReductionSchedule({0, 4})).matrix(1).is_zero());
  CHECK_FALSE(column_reduce(net, w).declared_t().has_value());
  CHECK(column_reduce(net, w).provenance() == Provenance::constructed);

  CHECK_THROWS_AS(column_reduce(net, ReductionSchedule({0, 1, 2})), InvalidArgument);
  CHECK_THROWS_AS(ReductionSchedule({0, 2, 1}), InvalidArgument);
  CHECK_THROWS_AS(ReductionSchedule({1, 2}), InvalidArgument);
}

TEST_CASE("column reduction is idempotent and matches the inferred schedule") {
  const auto net = random_net(3, 6, 5, 8);
  const ReductionSchedule w({0, 1, 1, 3, 6});
  const auto once = column_reduce(net, w);
  CHECK(column_reduce(once, w).same_matrices(once));
  CHECK(has_column_pattern(once, w));
  const auto inferred = infer_column_schedule(once);
  for (std::size_t j = 0; j < 5; ++j) CHECK(inferred[j] >= w[j]);
}

TEST_CASE("s_star") {
  CHECK(ReductionSchedule({0, 1, 4, 4}).s_star(4) == 2);
  CHECK(ReductionSchedule({0, 1, 3}).s_star(4) == 3);
  CHECK(ReductionSchedule({0, 0}).s_star(1) == 2);
}

TEST_CASE("prepend_zero_columns_seq and block_diag_seq") {
  const auto p = pascal_matrix(2, 8);
  const auto id = FieldMatrix::identity(2, 8);

  const auto same = prepend_zero_columns_seq(id, p, 0, 4);
  CHECK(same.matrix(0) == FieldMatrix::identity(2, 4));
  CHECK(same.matrix(1) == pascal_matrix(2, 4));

  const auto shifted = prepend_zero_columns_seq(id, p, 1, 4);
  CHECK(shifted.matrix(0) ==
        FieldMatrix::from_rows(2, {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}, {0, 0, 0, 0}}));
  CHECK(shifted.declared_t() == 1u);
  CHECK_THROWS_AS(prepend_zero_columns_seq(id, p, 5, 4), InvalidArgument);

  CHECK(block_diag_seq(p, 0, 5) == pascal_matrix(2, 5));
  CHECK(block_diag_seq(p, 5, 5) == pascal_matrix(2, 5));
  const auto e2 = block_diag_seq(p, 2, 5);
  CHECK(submatrix(e2, 0, 0, 2, 2) == pascal_matrix(2, 2));
  CHECK(submatrix(e2, 2, 2, 3, 3) == pascal_matrix(2, 3));
  CHECK(submatrix(e2, 0, 2, 2, 3).is_zero());
  CHECK(submatrix(e2, 2, 0, 3, 2).is_zero());
  CHECK_THROWS_AS(block_diag_seq(p, 6, 5), InvalidArgument);
}

TEST_CASE("generate_points examples") {
  const auto pts = generate_points(pascal_net(2, 4, 2));
  CHECK(pts.rows() == 16);
  CHECK(pts.denominator() == 16);
  CHECK(pts(0, 0) == 0);
  CHECK(pts(0, 1) == 0);
  CHECK(pts(1, 0) == 8);
  CHECK(pts(1, 1) == 8);
  CHECK(pts(3, 0) == 12);
  CHECK(pts(3, 1) == 4);
  CHECK(pts.value(3, 0) == 0.75);
  CHECK(generate_points(pascal_net(2, 4, 2), 2).rows() == 4);
  CHECK_THROWS_AS(generate_points(pascal_net(2, 4, 2), 5), InvalidArgument);
}

TEST_CASE("fast point generation matches the definition") {
  std::mt19937_64 gen(1);
  for (std::uint32_t b : {2u, 3u, 5u}) {
    for (unsigned m : {1u, 3u, 5u}) {
      const auto net = random_net(b, m, 3, gen());
      const auto pts = generate_points(net);
      const auto ref = oracle::points_by_definition(net);
      CHECK(std::vector<std::uint64_t>(pts.numerators().begin(), pts.numerators().end()) == ref);
      for (const auto& c : net.matrices())
        for (unsigned d = 0; d <= m; ++d)
          CHECK(generate_coordinate(c, d) == detail::generate_coordinate_naive(c, d));
    }
  }
}

TEST_CASE("reduced coordinates repeat in blocks of b^{m - w_j}") {
  for (std::uint32_t b : {2u, 3u}) {
    const unsigned m = b == 2 ? 10 : 6;
    const auto net = random_net(b, m, 4, 17);
    const ReductionSchedule w({0, 1, 3, m});
    const auto red = column_reduce(net, w);
    const auto pts = generate_points(red);
    const auto full = generate_points(net);
    for (std::size_t j = 0; j < 4; ++j) {
      const auto xj = generate_coordinate(red.matrix(j), m - std::min(m, w[j]));
      const auto col = pts.column(j);
      for (std::size_t k = 0; k < col.size(); ++k) REQUIRE(col[k] == xj[k % xj.size()]);
    }
    CHECK(pts.column(0) == full.column(0));
    for (auto v : pts.numerators()) CHECK(v < pts.denominator());
  }
}

TEST_CASE("net file round trip and parse errors") {
  const auto net = random_net(3, 4, 3, 5);
  std::stringstream ss;
  write_net(ss, net);
  const std::string text = ss.str();
  const auto back = read_net(ss);
  CHECK(back.same_matrices(net));
  CHECK(back.provenance() == Provenance::file);
  std::stringstream again;
  write_net(again, back);
  CHECK(again.str() == text);

  auto parse = [](const std::string& t) {
    std::istringstream in(t);
    return read_net(in);
  };
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse("4 1 1\n1\n"), ParseError);
  CHECK_THROWS_AS(parse("2 2 1\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse("2 2 1\n1 0\n0 2\n"), ParseError);
  CHECK_THROWS_AS(parse("2 2 1\n1 0 1\n0 1\n"), ParseError);
  CHECK_THROWS_AS(parse("2 2 1\n1 0\n0 1\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse("2 2 1\n1 x\n0 1\n"), ParseError);
  CHECK(parse("2 1 1\r\n\r\n1\r\n").same_matrices(pascal_net(2, 1, 1)));
}

TEST_CASE("points CSV") {
  std::ostringstream a, b;
  write_points_csv(a, generate_points(pascal_net(2, 2, 2)));
  CHECK(a.str() == "k,x1,x2\n0,0/4,0/4\n1,2/4,2/4\n2,1/4,3/4\n3,3/4,1/4\n");
  write_points_csv(b, generate_points(pascal_net(2, 2, 1)), PointFormat::decimal);
  CHECK(b.str() == "k,x1\n0,0\n1,0.5\n2,0.25\n3,0.75\n");
}
