#include "crnet/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crnet {

double local_discrepancy(const PointBlock& points, const Subset& u_in, std::span<const double> x) {
  const Subset u = resolve_subset(u_in, points.s());
  if (x.size() != u.size()) throw InvalidArgument("local_discrepancy: x needs one entry per coordinate");
  double vol = 1.0;
  for (double xj : x) {
    if (!(xj > 0.0 && xj <= 1.0)) throw InvalidArgument("local_discrepancy: x must lie in (0, 1]");
    vol *= xj;
  }
  if (points.rows() == 0) return -vol;
  std::size_t count = 0;
  for (std::size_t k = 0; k < points.rows(); ++k) {
    bool inside = true;
    for (std::size_t a = 0; a < u.size() && inside; ++a) inside = points.value(k, u[a]) < x[a];
    count += inside;
  }
  return static_cast<double>(count) / static_cast<double>(points.rows()) - vol;
}

namespace {

// Calls fn(flat offset, multi-index) for every index in [lo, hi) of a box inside
// an array with the given strides.
template <class Fn>
void for_box(const std::vector<std::size_t>& lo, const std::vector<std::size_t>& hi,
             const std::vector<std::size_t>& stride, Fn&& fn) {
  const std::size_t d = lo.size();
  for (std::size_t a = 0; a < d; ++a)
    if (lo[a] >= hi[a]) return;
  std::vector<std::size_t> idx = lo;
  std::size_t off = 0;
  for (std::size_t a = 0; a < d; ++a) off += lo[a] * stride[a];
  for (;;) {
    fn(off, idx);
    std::size_t a = d;
    for (;;) {
      if (a == 0) return;
      --a;
      ++idx[a];
      off += stride[a];
      if (idx[a] < hi[a]) break;
      off -= (idx[a] - lo[a]) * stride[a];
      idx[a] = lo[a];
    }
  }
}

}  // namespace

double exact_star_discrepancy(const PointBlock& points, const Subset& u_in,
                              const StarDiscrepancyLimits& limits) {
  const Subset u = resolve_subset(u_in, points.s());
  const std::size_t d = u.size();
  if (d > limits.max_dims)
    throw InvalidArgument("exact_star_discrepancy: at most " + std::to_string(limits.max_dims) +
                          " coordinates");
  if (points.rows() > limits.max_points)
    throw InvalidArgument("exact_star_discrepancy: at most " + std::to_string(limits.max_points) +
                          " points");
  const std::size_t n = points.rows();
  if (n == 0) return 1.0;
  const std::uint64_t den = points.denominator();
  const double nd = static_cast<double>(n);

  // Grid per axis: distinct coordinates and 1.
  std::vector<std::vector<std::uint64_t>> grid(d);
  std::vector<std::vector<double>> vals(d);
  std::vector<std::vector<std::size_t>> idx(n, std::vector<std::size_t>(d));
  for (std::size_t a = 0; a < d; ++a) {
    auto col = points.column(u[a]);
    col.push_back(den);
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    for (std::size_t k = 0; k < n; ++k)
      idx[k][a] = static_cast<std::size_t>(
          std::lower_bound(col.begin(), col.end(), points(k, u[a])) - col.begin());
    vals[a].resize(col.size());
    for (std::size_t i = 0; i < col.size(); ++i)
      vals[a][i] = static_cast<double>(col[i]) / static_cast<double>(den);
    grid[a] = std::move(col);
  }

  // Sweep the last axis, keeping counts F[g] = #{points with idx_a < g_a for the
  // leading axes} over the points already passed on the last axis.
  const std::size_t lead = d - 1;
  std::vector<std::size_t> stride(lead), extent(lead);
  std::size_t cells = 1;
  for (std::size_t a = lead; a-- > 0;) {
    stride[a] = cells;
    extent[a] = grid[a].size() + 1;
    cells *= extent[a];
  }
  std::uint64_t corners = grid[d - 1].size();
  for (std::size_t a = 0; a < lead; ++a) corners *= grid[a].size();
  const std::uint64_t work = static_cast<std::uint64_t>(n) * cells + corners;
  if (work > limits.max_work)
    throw BudgetExceeded("exact_star_discrepancy grid too large", work, limits.max_work);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return idx[x][d - 1] < idx[y][d - 1]; });

  std::vector<std::uint32_t> f_lo(cells, 0), f_hi(cells, 0);
  std::size_t next = 0;
  auto add_points_at = [&](std::size_t level) {
    while (next < n && idx[order[next]][d - 1] == level) {
      const auto& p = idx[order[next]];
      std::vector<std::size_t> lo(lead);
      for (std::size_t a = 0; a < lead; ++a) lo[a] = p[a] + 1;
      for_box(lo, extent, stride, [&](std::size_t off, const std::vector<std::size_t>&) { ++f_hi[off]; });
      ++next;
    }
  };
  add_points_at(0);

  double best = 0.0;
  const std::vector<std::size_t> zero(lead, 0);
  std::vector<std::size_t> top(lead);
  for (std::size_t a = 0; a < lead; ++a) top[a] = grid[a].size();
  std::size_t shift = 0;  // offset from g to g + (1, ..., 1)
  for (std::size_t a = 0; a < lead; ++a) shift += stride[a];

  for (std::size_t i = 0; i < grid[d - 1].size(); ++i) {
    const double vlast = vals[d - 1][i];
    for_box(zero, top, stride, [&](std::size_t off, const std::vector<std::size_t>& c) {
      double vol = vlast;
      for (std::size_t a = 0; a < lead; ++a) vol *= vals[a][c[a]];
      const double below = vol - static_cast<double>(f_lo[off]) / nd;
      const double above = static_cast<double>(f_hi[off + shift]) / nd - vol;
      best = std::max({best, below, above});
    });
    f_lo = f_hi;
    add_points_at(i + 1);
  }
  return best;
}

// Coefficients ----------------------------------------------------------------

namespace {

Rational binom(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Rational r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Rational pow_r(const Rational& x, long long e) {
  Rational r = 1;
  for (long long i = 0; i < e; ++i) r *= x;
  return r;
}

Rational factorial(long long n) {
  Rational r = 1;
  for (long long i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace

std::vector<Rational> avb_coefficients_exact(std::uint32_t b, std::size_t k_size) {
  if (k_size < 2) throw InvalidArgument("avb_coefficients: |u| must be >= 2");
  if (b < 2) throw InvalidArgument("avb_coefficients: base must be >= 2");
  const Rational bb = b;
  const Rational a0 = (b % 2 == 0) ? Rational((bb + 8) / 4) : Rational((bb + 4) / 2);
  const Rational a1 = (b % 2 == 0) ? Rational(bb * bb / (4 * (bb + 1))) : Rational((bb - 1) / 4);
  const long long k = static_cast<long long>(k_size);
  const Rational half_b2 = (bb + 2) / 2;
  std::vector<Rational> out(k_size);
  for (long long v = 0; v < k; ++v) {
    Rational term = 0;
    if (v <= k - 2)
      term += binom(k - 2, v) * pow_r(half_b2, k - 2 - v) * pow_r(bb - 1, v) /
              (pow_r(2, v) * factorial(v)) * (a0 + k * k - 4);
    if (v >= 1)
      term += binom(k - 2, v - 1) * pow_r(half_b2, k - 1 - v) * pow_r(bb - 1, v - 1) /
              (pow_r(2, v - 1) * factorial(v)) * a1;
    out[v] = term;
  }
  return out;
}

std::vector<double> avb_coefficients(std::uint32_t b, std::size_t k) {
  const auto exact = avb_coefficients_exact(b, k);
  std::vector<double> out;
  out.reserve(exact.size());
  for (const auto& r : exact) out.push_back(static_cast<double>(r));
  return out;
}

namespace {

double avb_sum(std::uint32_t b, std::size_t k, unsigned m) {
  const auto a = avb_coefficients_exact(b, k);
  Rational sum = 0, mv = 1;
  for (const auto& av : a) {
    sum += av * mv;
    mv *= m;
  }
  return static_cast<double>(sum);
}

}  // namespace

double projection_disc_bound(std::uint32_t b, unsigned m, unsigned t, std::size_t u_size,
                             bool in_sstar) {
  if (t > m) throw InvalidArgument("projection_disc_bound: t > m");
  if (u_size == 0) throw InvalidArgument("projection_disc_bound: empty projection");
  if (!in_sstar) return 1.0;
  const double scale = std::pow(static_cast<double>(b), -static_cast<double>(m - t));
  if (u_size == 1) return scale;
  return scale * avb_sum(b, u_size, m);
}

// Global bound ----------------------------------------------------------------

unsigned ProjectionTValues::at(const Subset& u) const {
  if (auto it = t.find(u); it != t.end()) return it->second;
  if (default_t) return *default_t;
  std::string name = "{";
  for (std::size_t a = 0; a < u.size(); ++a) name += (a ? "," : "") + std::to_string(u[a] + 1);
  throw InvalidArgument("missing t value for projection " + name + "}");
}

GlobalBound global_disc_bound(const ProjectionTValues& t_u, const ReductionSchedule& sched,
                              const WeightModel& weights, std::uint32_t b, unsigned m,
                              std::size_t proj_cap, std::uint64_t budget) {
  const std::size_t s = sched.size();
  if (weights.size() < s) throw InvalidArgument("global_disc_bound: fewer weights than coordinates");
  const std::size_t s_star = sched.s_star(m);
  const double logb = std::log(static_cast<double>(b));
  auto scale = [&](unsigned digits) {  // b^{min(m, digits)} / b^m
    return std::pow(static_cast<double>(b), -static_cast<double>(m - std::min(m, digits)));
  };

  GlobalBound out{0.0, std::nullopt, 0.0, 0.0, s_star};

  if (s_star < s) {
    // log of gamma_j (1 + b^{w_j}); the best u takes every factor above 1 and,
    // failing one outside [s*], the largest factor outside [s*].
    double sum = 0.0;
    bool outside_taken = false;
    double best_outside = -INFINITY;
    for (std::size_t j = 0; j < s; ++j) {
      const double w = sched[j];
      const double lf = std::log(weights.gamma(j)) + w * logb + std::log1p(std::pow(b, -w));
      if (lf > 0) {
        sum += lf;
        if (j >= s_star) outside_taken = true;
      }
      if (j >= s_star) best_outside = std::max(best_outside, lf);
    }
    if (!outside_taken) sum += best_outside;
    out.term_outside = std::exp(sum - m * logb);
  }

  for (std::size_t j = 0; j < s_star; ++j) {
    const unsigned t = t_u.at({j});
    out.term_single = std::max(out.term_single, weights.gamma(j) * scale(sched[j] + t));
  }

  const std::size_t cap = std::min(proj_cap, s_star);
  std::uint64_t count = 0;
  for (std::size_t k = 2; k <= cap; ++k) {
    const std::uint64_t c = composition_count(static_cast<unsigned>(k), s_star - k + 1);
    if (__builtin_add_overflow(count, c, &count)) count = UINT64_MAX;
  }
  if (count > budget) throw BudgetExceeded("global_disc_bound projection enumeration", count, budget);
  for (std::size_t k = 2; k <= cap; ++k) {
    const double sum_a = avb_sum(b, k, m);
    for_each_subset(s_star, k, [&](const Subset& u) {
      const unsigned t = t_u.at(u);
      const double term = weights.gamma_u(u) * scale(sched[u.back()] + t) * sum_a;
      out.term_multi = std::max(out.term_multi, term);
    });
  }

  out.value = std::max(out.term_single, out.term_multi);
  if (out.term_outside) out.value = std::max(out.value, *out.term_outside);
  return out;
}

}  // namespace crnet
