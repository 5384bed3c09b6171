#include <doctest.h>

#include <json.hpp>
#include <random>

#include "../oracles.hpp"
#include "crnet/errors.hpp"
#include "crnet/quality.hpp"

using namespace crnet;

namespace {

NetSpec reduced_pascal() { return column_reduce(pascal_net(2, 4, 2), ReductionSchedule({0, 1})); }

}  // namespace

TEST_CASE("compositions") {
  std::vector<std::vector<unsigned>> seen;
  for_each_composition(2, 2, 2, [&](const std::vector<unsigned>& d) {
    seen.push_back(d);
    return true;
  });
  CHECK(seen == std::vector<std::vector<unsigned>>{{0, 2}, {1, 1}, {2, 0}});

  std::size_t n = 0;
  for_each_composition(5, 3, 5, [&](const std::vector<unsigned>&) { return ++n, true; });
  CHECK(n == composition_count(5, 3));
  CHECK(composition_count(5, 3) == 21);
  CHECK(composition_count(0, 4) == 1);
  CHECK(composition_count(1000, 1000) == UINT64_MAX);

  n = 0;
  for_each_composition(4, 2, 2, [&](const std::vector<unsigned>& d) {
    CHECK(d[0] <= 2);
    CHECK(d[1] <= 2);
    return ++n, true;
  });
  CHECK(n == 1);
  n = 0;
  CHECK_FALSE(for_each_composition(3, 2, 3, [&](const std::vector<unsigned>&) { return ++n < 2; }));
  CHECK(n == 2);
}

TEST_CASE("subsets") {
  std::vector<Subset> seen;
  for_each_subset(4, 2, [&](const Subset& u) { seen.push_back(u); });
  CHECK(seen == std::vector<Subset>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  CHECK(resolve_subset({}, 3) == Subset{0, 1, 2});
  CHECK_THROWS_AS(resolve_subset({1, 0}, 3), InvalidArgument);
  CHECK_THROWS_AS(resolve_subset({3}, 3), InvalidArgument);
  CHECK_THROWS_AS(resolve_subset({1, 1}, 3), InvalidArgument);
}

TEST_CASE("rho examples") {
  CHECK(rho(pascal_net(2, 4, 2)) == 4);
  CHECK(rho(reduced_pascal()) == 3);
  const auto zero = column_reduce(pascal_net(2, 4, 2), ReductionSchedule({0, 4}));
  CHECK(rho(zero, {1}) == 0);
  CHECK(rho(zero) == 0);
  CHECK(rho(zero, {0}) == 4);
  CHECK(rho(pascal_net(3, 5, 2)) == 5);
}

TEST_CASE("rho and brute force agree on random nets") {
  std::mt19937_64 gen(4);
  for (std::uint32_t b : {2u, 3u}) {
    for (int trial = 0; trial < 20; ++trial) {
      const unsigned m = b == 2 ? 5 : 3;
      const auto net = random_net(b, m, 3, gen());
      const auto pts = generate_points(net);
      for (const Subset& u : {Subset{0, 1}, Subset{1, 2}, Subset{0, 1, 2}}) {
        const unsigned t = strict_t(pts, u);
        CHECK(t == m - rho(net, u));
        CHECK(oracle::is_net_by_boxes(pts, t, u));
        if (t > 0) CHECK_FALSE(oracle::is_net_by_boxes(pts, t - 1, u));
      }
    }
  }
}

TEST_CASE("sequence_t") {
  CHECK(sequence_t(pascal_net(2, 6, 2)) == 0);
  const auto net = prepend_zero_columns_seq(FieldMatrix::identity(2, 8), pascal_matrix(2, 8), 2, 6);
  CHECK(sequence_t(net) == 2);
}

TEST_CASE("theorem_bounds examples") {
  const auto a = theorem_bounds(0, 4, ReductionSchedule({0, 1}), {1});
  CHECK(a.lower == 3);
  CHECK(a.upper == 3);
  CHECK(a.t_tilde_upper == 1);

  const auto b = theorem_bounds(2, 8, ReductionSchedule({0, 3}));
  CHECK(b.lower == 3);
  CHECK(b.upper == 5);
  CHECK(b.t_tilde_upper == 5);
  CHECK(b.strict_upper == 5);

  const auto c = theorem_bounds(2, 5, ReductionSchedule({0, 7}));
  CHECK(c.lower == 0);
  CHECK(c.upper == 0);
  CHECK(c.t_tilde_upper == 5);

  CHECK(theorem_bounds(1, 6, ReductionSchedule({0, 2, 4}), {0, 1}).upper == 4);
  CHECK_THROWS_AS(theorem_bounds(7, 6, ReductionSchedule({0, 1})), InvalidArgument);
}

TEST_CASE("verify_tms_net examples") {
  const auto pts = generate_points(pascal_net(2, 4, 2));
  CHECK(verify_tms_net(pts, 0));
  const auto red = generate_points(reduced_pascal());
  CHECK_FALSE(verify_tms_net(red, 0));
  CHECK(verify_tms_net(red, 1));
  CHECK(verify_tms_net(red, 4));
  CHECK(strict_t(pts) == 0);
  CHECK(strict_t(red) == 1);
  CHECK_THROWS_AS(verify_tms_net(pts, 5), InvalidArgument);
  CHECK_THROWS_AS(verify_tms_net(generate_points(pascal_net(2, 4, 2), 3), 0), InvalidArgument);
}

TEST_CASE("verify_tms_net matches the box oracle and propagates") {
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = generate_points(random_net(2, 5, 3, gen()));
    for (unsigned t = 0; t <= 5; ++t) {
      const bool ok = verify_tms_net(pts, t);
      CHECK(ok == oracle::is_net_by_boxes(pts, t, {0, 1, 2}));
      if (ok && t < 5) CHECK(verify_tms_net(pts, t + 1));
    }
  }
}

TEST_CASE("verify_tmes_net examples") {
  const auto red = generate_points(reduced_pascal());
  CHECK(verify_tmes_net(red, 0, {{2, 3}}));
  CHECK_FALSE(verify_tmes_net(red, 0, {{1, 1}}));
  CHECK(verify_tmes_net(red, 1, {{1, 1}}));
  // Only d = (1, 0) solves 3 d_1 + 2 d_2 = 3.
  CHECK(shape_solutions({{3, 2}}, 3) == std::vector<std::vector<unsigned>>{{1, 0}});
  CHECK(verify_tmes_net(red, 1, {{3, 2}}));
  // No solution at all: vacuously true.
  CHECK(shape_solutions({{3, 3}}, 4).empty());
  CHECK(verify_tmes_net(red, 0, {{3, 3}}));
  CHECK_THROWS_AS(verify_tmes_net(red, 0, {{0, 1}}), InvalidArgument);
  CHECK_THROWS_AS(verify_tmes_net(red, 0, {{1}}), InvalidArgument);
}

TEST_CASE("sandwich on reduced pascal nets in base 3") {
  for (unsigned m = 1; m <= 4; ++m) {
    for (unsigned w2 = 0; w2 <= m; ++w2) {
      for (unsigned w3 = w2; w3 <= m; ++w3) {
        const ReductionSchedule w({0, w2, w3});
        const auto red = column_reduce(pascal_net(3, m, 3), w);
        for (const Subset& u : {Subset{0, 1}, Subset{0, 2}, Subset{1, 2}}) {
          const auto tb = theorem_bounds(0, m, w, u);
          const unsigned r = rho(red, u);
          CHECK(tb.lower <= r);
          CHECK(r <= tb.upper);
        }
      }
    }
  }
}

TEST_CASE("quality_report and JSON") {
  ReportOptions opt;
  opt.base_t = 0;
  opt.schedule = ReductionSchedule({0, 1});
  const auto rep = quality_report(reduced_pascal(), opt);
  CHECK(rep.rho == 3);
  CHECK(rep.t_rank == 1);
  CHECK(rep.t_exact == 1u);
  CHECK(rep.t_upper == 1);
  CHECK(rep.t_upper_source == "theorem");
  REQUIRE(rep.per_projection.size() == 3);
  CHECK(rep.per_projection[0].u == Subset{0});
  CHECK(rep.per_projection[2].u == Subset{0, 1});

  const auto j = nlohmann::json::parse(to_json(rep));
  CHECK(j["rho"] == 3);
  CHECK(j["t_exact"] == 1);
  CHECK(j["per_projection"][2]["u"] == nlohmann::json::array({1, 2}));
  CHECK(j["per_projection"][1]["rho_upper"] == 3);

  ReportOptions plain;
  plain.brute_force = false;
  const auto rep2 = quality_report(reduced_pascal(), plain);
  CHECK_FALSE(rep2.t_exact.has_value());
  CHECK(rep2.t_upper_source == "rank");
  CHECK(nlohmann::json::parse(to_json(rep2))["t_exact"].is_null());
  CHECK(to_json(rep) == to_json(quality_report(reduced_pascal(), opt)));
}

TEST_CASE("enumeration budgets") {
  const auto net = random_net(2, 16, 6, 1);
  CHECK_THROWS_AS(rho(net, {}, 100), BudgetExceeded);
  CHECK_THROWS_AS(strict_t(generate_points(pascal_net(2, 8, 4)), {}, 10), BudgetExceeded);
  try {
    rho(net, {}, 100);
  } catch (const BudgetExceeded& e) {
    CHECK(e.budget() == 100);
    CHECK(e.required() > 100);
  }
}
