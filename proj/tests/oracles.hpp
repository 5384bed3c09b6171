#pragma once

// Deliberately slow, independent reference implementations used by the tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "crnet/gf_matrix.hpp"
#include "crnet/net.hpp"

namespace oracle {

using crnet::Digit;
using crnet::FieldMatrix;
using crnet::PointBlock;

// binom(n, k) mod p by Lucas' theorem.
inline Digit lucas_binom(std::uint64_t n, std::uint64_t k, std::uint32_t p) {
  std::uint64_t r = 1;
  while (n || k) {
    const std::uint64_t ni = n % p, ki = k % p;
    if (ki > ni) return 0;
    std::uint64_t c = 1;
    for (std::uint64_t i = 0; i < ki; ++i) c = c * (ni - i) / (i + 1);
    r = r * (c % p) % p;
    n /= p;
    k /= p;
  }
  return static_cast<Digit>(r);
}

// Rank as log_p of the size of the row span, by enumerating all combinations.
inline std::size_t span_rank(const FieldMatrix& m) {
  const std::uint32_t p = m.base();
  std::set<std::vector<Digit>> span;
  std::vector<Digit> coeff(m.rows(), 0);
  for (;;) {
    std::vector<Digit> v(m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) v[c] = (v[c] + coeff[r] * m(r, c)) % p;
    span.insert(v);
    std::size_t i = 0;
    while (i < m.rows() && ++coeff[i] == p) coeff[i++] = 0;
    if (i == m.rows()) break;
  }
  std::size_t r = 0;
  for (std::size_t size = 1; size < span.size(); size *= p) ++r;
  return r;
}

inline FieldMatrix random_matrix(std::uint32_t b, std::size_t rows, std::size_t cols,
                                 std::mt19937_64& gen) {
  std::vector<Digit> e(rows * cols);
  for (auto& x : e) x = static_cast<Digit>(gen() % b);
  return FieldMatrix(b, rows, cols, std::move(e));
}

// Point numerators straight from the definition.
inline std::vector<std::uint64_t> points_by_definition(const crnet::NetSpec& net) {
  const std::uint32_t b = net.base();
  const unsigned m = net.m();
  std::uint64_t n = 1;
  for (unsigned i = 0; i < m; ++i) n *= b;
  std::vector<std::uint64_t> out;
  for (std::uint64_t k = 0; k < n; ++k) {
    std::vector<Digit> kd(m);
    std::uint64_t kk = k;
    for (unsigned i = 0; i < m; ++i) {
      kd[i] = static_cast<Digit>(kk % b);
      kk /= b;
    }
    for (std::size_t j = 0; j < net.s(); ++j) {
      std::uint64_t num = 0;
      for (unsigned i = 0; i < m; ++i) {
        std::uint64_t y = 0;
        for (unsigned r = 0; r < m; ++r) y += std::uint64_t{net.matrix(j)(i, r)} * kd[r];
        num = num * b + y % b;
      }
      out.push_back(num);
    }
  }
  return out;
}

// Elementary-interval net check that enumerates every box explicitly.
inline bool is_net_by_boxes(const PointBlock& pts, unsigned t, const std::vector<std::size_t>& u) {
  const std::uint32_t b = pts.base();
  const unsigned m = pts.m();
  auto pw = [b](unsigned e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
  };
  const unsigned target = m - t;
  // every d with sum = target, via an odometer over [0, target]^|u|
  std::vector<unsigned> odo(u.size(), 0);
  for (;;) {
    unsigned sum = 0;
    for (auto x : odo) sum += x;
    if (sum == target) {
      std::vector<std::uint64_t> a(u.size(), 0);
      for (;;) {
        std::uint64_t count = 0;
        for (std::size_t k = 0; k < pts.rows(); ++k) {
          bool in = true;
          for (std::size_t q = 0; q < u.size() && in; ++q) {
            const std::uint64_t lo = a[q] * pw(m - odo[q]);
            const std::uint64_t hi = (a[q] + 1) * pw(m - odo[q]);
            const std::uint64_t x = pts(k, u[q]);
            in = x >= lo && x < hi;
          }
          count += in;
        }
        if (count != pw(t)) return false;
        std::size_t q = 0;
        while (q < u.size() && ++a[q] == pw(odo[q])) a[q++] = 0;
        if (q == u.size()) break;
      }
    }
    std::size_t i = 0;
    while (i < odo.size() && ++odo[i] > target) odo[i++] = 0;
    if (i == odo.size()) break;
  }
  return true;
}

// Star discrepancy lower estimate on the grid h, 2h, ..., 1 with h = 1 / steps.
inline double grid_star_discrepancy(const PointBlock& pts, const std::vector<std::size_t>& u,
                                    unsigned steps) {
  double best = 0.0;
  std::vector<unsigned> g(u.size(), 1);
  for (;;) {
    double vol = 1.0;
    for (auto x : g) vol *= static_cast<double>(x) / steps;
    std::size_t count = 0;
    for (std::size_t k = 0; k < pts.rows(); ++k) {
      bool in = true;
      for (std::size_t q = 0; q < u.size() && in; ++q)
        in = static_cast<long double>(pts(k, u[q])) * steps <
             static_cast<long double>(g[q]) * pts.denominator();
      count += in;
    }
    best = std::max(best, std::abs(static_cast<double>(count) / pts.rows() - vol));
    std::size_t q = 0;
    while (q < g.size() && ++g[q] > steps) g[q++] = 1;
    if (q == g.size()) break;
  }
  return best;
}

}  // namespace oracle
