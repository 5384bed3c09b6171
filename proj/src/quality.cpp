#include "crnet/quality.hpp"

#include <algorithm>
#include <array>
#include <json.hpp>
#include <limits>

namespace crnet {
namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_mul_overflow(a, b, &r) ? kSaturated : r;
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  return __builtin_add_overflow(a, b, &r) ? kSaturated : r;
}

void charge(std::uint64_t& spent, std::uint64_t cost, std::uint64_t budget, const char* what) {
  spent = sat_add(spent, cost);
  if (spent > budget) throw BudgetExceeded(what, spent, budget);
}

bool compositions_rec(std::vector<unsigned>& d, std::size_t pos, unsigned remaining, unsigned cap,
                      const std::function<bool(const std::vector<unsigned>&)>& fn) {
  if (pos == 0) {
    if (remaining > cap) return true;
    d[0] = remaining;
    return fn(d);
  }
  for (unsigned v = std::min(remaining, cap) + 1; v-- > 0;) {
    d[pos] = v;
    if (!compositions_rec(d, pos - 1, remaining - v, cap, fn)) return false;
  }
  d[pos] = 0;
  return true;
}

// Tests whether a given selection of leading rows is linearly independent.
class IndependenceTester {
 public:
  IndependenceTester(const NetSpec& net, const Subset& u) : net_(net), u_(u) {
    packed_ = net.base() == 2 && net.m() <= 64;
    if (packed_) {
      rows_.resize(u.size());
      for (std::size_t a = 0; a < u.size(); ++a) {
        const auto& c = net.matrix(u[a]);
        rows_[a].resize(c.rows());
        for (std::size_t i = 0; i < c.rows(); ++i) {
          std::uint64_t v = 0;
          for (std::size_t col = 0; col < c.cols(); ++col)
            if (c(i, col)) v |= std::uint64_t{1} << col;
          rows_[a][i] = v;
        }
      }
    }
  }

  bool independent(const std::vector<unsigned>& d) const {
    if (packed_) return independent_packed(d);
    std::vector<RowTake> parts;
    parts.reserve(u_.size());
    unsigned total = 0;
    for (std::size_t a = 0; a < u_.size(); ++a) {
      parts.push_back({&net_.matrix(u_[a]), d[a]});
      total += d[a];
    }
    return rank(stack_rows(parts)) == total;
  }

 private:
  bool independent_packed(const std::vector<unsigned>& d) const {
    std::array<std::uint64_t, 64> basis{};
    for (std::size_t a = 0; a < u_.size(); ++a) {
      for (unsigned i = 0; i < d[a]; ++i) {
        std::uint64_t v = rows_[a][i];
        while (v) {
          const int h = 63 - std::countl_zero(v);
          if (!basis[h]) {
            basis[h] = v;
            break;
          }
          v ^= basis[h];
        }
        if (!v) return false;
      }
    }
    return true;
  }

  const NetSpec& net_;
  const Subset& u_;
  bool packed_ = false;
  std::vector<std::vector<std::uint64_t>> rows_;
};

// True iff every cell of the digit shape holds exactly `expected` points.
bool cells_balanced(const PointBlock& points, const Subset& axes,
                    const std::vector<unsigned>& digits, const std::vector<std::uint64_t>& powers,
                    std::uint64_t expected, std::vector<std::uint32_t>& counts) {
  const unsigned m = points.m();
  unsigned total_digits = 0;
  for (unsigned d : digits) total_digits += d;
  const std::uint64_t cells = powers[total_digits];
  counts.assign(cells, 0);
  for (std::size_t k = 0; k < points.rows(); ++k) {
    std::uint64_t id = 0;
    for (std::size_t a = 0; a < axes.size(); ++a)
      id = id * powers[digits[a]] + points(k, axes[a]) / powers[m - digits[a]];
    ++counts[id];
  }
  return std::all_of(counts.begin(), counts.end(),
                     [expected](std::uint32_t c) { return c == expected; });
}

std::vector<std::uint64_t> power_table(std::uint32_t b, unsigned m) {
  std::vector<std::uint64_t> p(m + 1, 1);
  for (unsigned i = 1; i <= m; ++i) p[i] = p[i - 1] * b;
  return p;
}

void check_full_block(const PointBlock& points) {
  if (points.rows() != points.denominator())
    throw InvalidArgument("net verification needs all b^m points");
}

}  // namespace

void for_each_subset(std::size_t s, std::size_t k, const std::function<void(const Subset&)>& fn) {
  if (k > s) return;
  Subset cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  for (;;) {
    fn(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == s - k + i - 1) --i;
    if (i == 0) return;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
}

Subset full_subset(std::size_t s) {
  Subset u(s);
  for (std::size_t j = 0; j < s; ++j) u[j] = j;
  return u;
}

Subset resolve_subset(const Subset& u, std::size_t s) {
  if (u.empty()) return full_subset(s);
  for (std::size_t a = 0; a < u.size(); ++a) {
    if (u[a] >= s) throw InvalidArgument("subset index out of range");
    if (a && u[a] <= u[a - 1]) throw InvalidArgument("subset must be sorted and unique");
  }
  return u;
}

std::uint64_t composition_count(unsigned n, std::size_t k) {
  if (k == 0) return n == 0 ? 1 : 0;
  // binom(n + k - 1, n) built incrementally; each prefix is itself a binomial.
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= n; ++i) {
    const unsigned __int128 next = static_cast<unsigned __int128>(r) * (k - 1 + i) / i;
    if (next > kSaturated) return kSaturated;
    r = static_cast<std::uint64_t>(next);
  }
  return r;
}

bool for_each_composition(unsigned n, std::size_t k, unsigned cap,
                          const std::function<bool(const std::vector<unsigned>&)>& fn) {
  if (k == 0) throw InvalidArgument("composition into zero parts");
  std::vector<unsigned> d(k, 0);
  return compositions_rec(d, k - 1, n, cap, fn);
}

unsigned rho(const NetSpec& net, const Subset& u_in, std::uint64_t budget) {
  const Subset u = resolve_subset(u_in, net.s());
  const unsigned m = net.m();
  const IndependenceTester tester(net, u);
  std::uint64_t spent = 0;
  for (unsigned r = 1; r <= m; ++r) {
    charge(spent, sat_mul(sat_mul(composition_count(r, u.size()), r), m), budget,
           "rho enumeration budget exceeded");
    const bool all = for_each_composition(
        r, u.size(), m, [&](const std::vector<unsigned>& d) { return tester.independent(d); });
    if (!all) return r - 1;
  }
  return m;
}

unsigned sequence_t(const NetSpec& net, const Subset& u, std::uint64_t budget) {
  unsigned t = 0;
  for (unsigned mp = 1; mp <= net.m(); ++mp) {
    const NetSpec lead = leading_net(net, mp);
    t = std::max(t, mp - rho(lead, u, budget));
  }
  return t;
}

TheoremBounds theorem_bounds(unsigned t, unsigned m, const ReductionSchedule& sched,
                             const Subset& u_in) {
  if (t > m) throw InvalidArgument("theorem_bounds: t > m");
  const Subset u = resolve_subset(u_in, sched.size());
  const unsigned w = sched[u.back()];
  auto pos_diff = [](long long a) { return static_cast<unsigned>(std::max(0LL, a)); };
  TheoremBounds out{};
  out.lower = pos_diff(static_cast<long long>(m) - w - t);
  out.upper = pos_diff(static_cast<long long>(m) - w);
  out.t_tilde_upper = std::min(m, w + t);
  out.strict_upper = pos_diff(static_cast<long long>(m) - std::max(t, w));
  return out;
}

bool verify_tms_net(const PointBlock& points, unsigned t, const Subset& u_in,
                    std::uint64_t budget) {
  const unsigned m = points.m();
  if (t > m) throw InvalidArgument("verify_tms_net: t > m");
  check_full_block(points);
  const Subset u = resolve_subset(u_in, points.s());
  const unsigned target = m - t;
  const std::uint64_t cost = sat_mul(composition_count(target, u.size()), points.rows());
  if (cost > budget) throw BudgetExceeded("elementary interval enumeration budget exceeded", cost, budget);
  const auto powers = power_table(points.base(), m);
  const std::uint64_t expected = powers[t];
  std::vector<std::uint32_t> counts;
  return for_each_composition(target, u.size(), m, [&](const std::vector<unsigned>& d) {
    return cells_balanced(points, u, d, powers, expected, counts);
  });
}

unsigned strict_t(const PointBlock& points, const Subset& u, std::uint64_t budget) {
  for (unsigned t = 0; t < points.m(); ++t)
    if (verify_tms_net(points, t, u, budget)) return t;
  return points.m();
}

std::vector<std::vector<unsigned>> shape_solutions(const ShapeVector& e, unsigned target) {
  if (e.e.empty()) throw InvalidArgument("shape vector is empty");
  for (unsigned v : e.e)
    if (v < 1) throw InvalidArgument("shape vector entries must be >= 1");
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> d(e.e.size(), 0);
  std::function<void(std::size_t, unsigned)> rec = [&](std::size_t pos, unsigned remaining) {
    if (pos == d.size()) {
      if (remaining == 0) out.push_back(d);
      return;
    }
    for (unsigned v = 0; v * e.e[pos] <= remaining; ++v) {
      d[pos] = v;
      rec(pos + 1, remaining - v * e.e[pos]);
    }
    d[pos] = 0;
  };
  rec(0, target);
  return out;
}

bool verify_tmes_net(const PointBlock& points, unsigned t, const ShapeVector& e,
                     std::uint64_t budget) {
  const unsigned m = points.m();
  if (t > m) throw InvalidArgument("verify_tmes_net: t > m");
  if (e.e.size() != points.s()) throw InvalidArgument("shape vector length != dimension");
  check_full_block(points);
  const auto solutions = shape_solutions(e, m - t);
  const std::uint64_t cost = sat_mul(solutions.size(), points.rows());
  if (cost > budget) throw BudgetExceeded("elementary interval enumeration budget exceeded", cost, budget);
  const auto powers = power_table(points.base(), m);
  const Subset axes = full_subset(points.s());
  std::vector<std::uint32_t> counts;
  for (const auto& d : solutions) {
    std::vector<unsigned> digits(d.size());
    for (std::size_t j = 0; j < d.size(); ++j) digits[j] = d[j] * e.e[j];
    if (!cells_balanced(points, axes, digits, powers, powers[t], counts)) return false;
  }
  return true;
}

// Reports ---------------------------------------------------------------------

namespace {

std::uint64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  return composition_count(static_cast<unsigned>(k), n - k + 1);
}

}  // namespace

QualityReport quality_report(const NetSpec& net, const ReportOptions& options) {
  QualityReport rep{};
  rep.base = net.base();
  rep.m = net.m();
  rep.s = net.s();
  rep.rho = rho(net, {}, options.budget);
  rep.t_rank = net.m() - rep.rho;

  const bool have_theorem = options.base_t && options.schedule;
  if (have_theorem) {
    rep.t_upper = theorem_bounds(*options.base_t, net.m(), *options.schedule).t_tilde_upper;
    rep.t_upper_source = "theorem";
  } else {
    rep.t_upper = rep.t_rank;
    rep.t_upper_source = "rank";
  }

  if (options.brute_force) rep.t_exact = strict_t(generate_points(net), {}, options.budget);

  const std::size_t cap = std::min(options.projection_cap, net.s());
  std::uint64_t nsubsets = 0;
  for (std::size_t k = 1; k <= cap; ++k) nsubsets = sat_add(nsubsets, binomial(net.s(), k));
  if (nsubsets > options.budget)
    throw BudgetExceeded("projection table budget exceeded", nsubsets, options.budget);

  std::vector<Subset> subsets;
  for (std::size_t k = 1; k <= cap; ++k)
    for_each_subset(net.s(), k, [&](const Subset& u) { subsets.push_back(u); });
  for (const auto& u : subsets) {
    ProjectionQuality pq{u, rho(net, u, options.budget), 0, std::nullopt};
    pq.t_rank = net.m() - pq.rho;
    if (have_theorem) pq.bounds = theorem_bounds(*options.base_t, net.m(), *options.schedule, u);
    rep.per_projection.push_back(std::move(pq));
  }
  return rep;
}

std::string to_json(const QualityReport& rep) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["base"] = rep.base;
  j["m"] = rep.m;
  j["s"] = rep.s;
  j["rho"] = rep.rho;
  j["t_rank"] = rep.t_rank;
  j["t_exact"] = rep.t_exact ? ordered_json(*rep.t_exact) : ordered_json(nullptr);
  j["t_upper"] = rep.t_upper;
  j["t_upper_source"] = rep.t_upper_source;
  ordered_json table = ordered_json::array();
  for (const auto& pq : rep.per_projection) {
    ordered_json row;
    ordered_json u = ordered_json::array();
    for (auto idx : pq.u) u.push_back(idx + 1);
    row["u"] = u;
    row["rho"] = pq.rho;
    row["t_rank"] = pq.t_rank;
    if (pq.bounds) {
      row["rho_lower"] = pq.bounds->lower;
      row["rho_upper"] = pq.bounds->upper;
      row["rho_strict_upper"] = pq.bounds->strict_upper;
      row["t_tilde_upper"] = pq.bounds->t_tilde_upper;
    }
    table.push_back(std::move(row));
  }
  j["per_projection"] = std::move(table);
  return j.dump(2) + "\n";
}

}  // namespace crnet
