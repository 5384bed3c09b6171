#include "crnet/net.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <random>
#include <utility>

#include "crnet/errors.hpp"

namespace crnet {

std::uint64_t checked_pow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > (std::uint64_t{1} << 62) / b)
      throw InvalidArgument(std::to_string(b) + "^" + std::to_string(e) + " is too large");
    r *= b;
  }
  return r;
}

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::pascal: return "pascal";
    case Provenance::random: return "random";
    case Provenance::file: return "file";
    case Provenance::constructed: return "constructed";
  }
  return "unknown";
}

// NetSpec -------------------------------------------------------------------

NetSpec::NetSpec(std::uint32_t base, unsigned m, std::vector<FieldMatrix> matrices,
                 Provenance provenance, std::optional<unsigned> declared_t,
                 std::optional<std::uint64_t> seed)
    : base_(base),
      m_(m),
      matrices_(std::move(matrices)),
      provenance_(provenance),
      declared_t_(declared_t),
      seed_(seed) {
  if (m == 0) throw InvalidArgument("net exponent m must be >= 1");
  if (matrices_.empty()) throw InvalidArgument("net needs at least one generating matrix");
  for (const auto& c : matrices_) {
    if (c.base() != base) throw InvalidArgument("generating matrix has the wrong base");
    if (c.rows() != m || c.cols() != m)
      throw InvalidArgument("generating matrices must be m x m");
  }
  if (declared_t_ && *declared_t_ > m) throw InvalidArgument("declared t exceeds m");
  (void)checked_pow(base, m);
}

bool NetSpec::same_matrices(const NetSpec& other) const {
  return base_ == other.base_ && m_ == other.m_ && matrices_ == other.matrices_;
}

// ReductionSchedule -----------------------------------------------------------

ReductionSchedule::ReductionSchedule(std::vector<unsigned> w) : w_(std::move(w)) {
  if (w_.empty()) throw InvalidArgument("reduction schedule is empty");
  if (w_.front() != 0) throw InvalidArgument("reduction schedule must start with w_1 = 0");
  for (std::size_t j = 1; j < w_.size(); ++j)
    if (w_[j] < w_[j - 1]) throw InvalidArgument("reduction schedule must be nondecreasing");
}

ReductionSchedule ReductionSchedule::none(std::size_t s) {
  return ReductionSchedule(std::vector<unsigned>(s, 0));
}

std::size_t ReductionSchedule::s_star(unsigned m) const {
  std::size_t n = 0;
  while (n < w_.size() && w_[n] < m) ++n;
  return n;
}

// PointBlock ------------------------------------------------------------------

PointBlock::PointBlock(std::uint32_t base, unsigned m, std::size_t s, std::size_t rows,
                       std::vector<std::uint64_t> numerators)
    : base_(base), m_(m), s_(s), rows_(rows), denominator_(checked_pow(base, m)),
      nums_(std::move(numerators)) {
  if (s == 0) throw InvalidArgument("point block needs at least one coordinate");
  if (nums_.size() != rows * s) throw InvalidArgument("point block size mismatch");
  for (auto v : nums_)
    if (v >= denominator_) throw InvalidArgument("point numerator out of range");
}

std::vector<std::uint64_t> PointBlock::column(std::size_t j) const {
  std::vector<std::uint64_t> out(rows_);
  for (std::size_t k = 0; k < rows_; ++k) out[k] = nums_[k * s_ + j];
  return out;
}

// Constructions ---------------------------------------------------------------

FieldMatrix pascal_matrix(std::uint32_t b, unsigned n) {
  FieldMatrix p(b, n, n);
  // Column r holds binom(r, i) for i = 0..r, built by Pascal's rule mod b.
  std::vector<Digit> prev(n, 0), cur(n, 0);
  for (unsigned r = 0; r < n; ++r) {
    cur[0] = 1;
    for (unsigned i = 1; i <= r; ++i) cur[i] = (prev[i - 1] + (i < r ? prev[i] : 0)) % b;
    for (unsigned i = 0; i <= r; ++i) p.set(i, r, cur[i]);
    std::swap(prev, cur);
  }
  return p;
}

NetSpec pascal_net(std::uint32_t b, unsigned m, std::size_t s) {
  if (m < 1) throw InvalidArgument("pascal_net needs m >= 1");
  if (s < 1) throw InvalidArgument("pascal_net needs s >= 1");
  const FieldMatrix p = pascal_matrix(b, m);
  std::vector<FieldMatrix> mats;
  mats.reserve(s);
  mats.push_back(FieldMatrix::identity(b, m));
  for (std::size_t j = 1; j < s; ++j) mats.push_back(multiply(mats.back(), p));
  std::optional<unsigned> t;
  if (s <= 2) t = 0;
  return NetSpec(b, m, std::move(mats), Provenance::pascal, t);
}

NetSpec random_net(std::uint32_t b, unsigned m, std::size_t s, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % b;
  auto digit = [&]() -> Digit {
    for (;;) {
      const std::uint64_t x = gen();
      if (x < limit) return static_cast<Digit>(x % b);
    }
  };
  std::vector<FieldMatrix> mats;
  mats.reserve(s);
  for (std::size_t j = 0; j < s; ++j) {
    std::vector<Digit> e(std::size_t{m} * m);
    for (auto& d : e) d = digit();
    mats.emplace_back(b, m, m, std::move(e));
  }
  return NetSpec(b, m, std::move(mats), Provenance::random, std::nullopt, seed);
}

namespace {

void check_schedule(const NetSpec& net, const ReductionSchedule& sched) {
  if (sched.size() != net.s())
    throw InvalidArgument("schedule length " + std::to_string(sched.size()) +
                          " != net dimension " + std::to_string(net.s()));
}

}  // namespace

NetSpec column_reduce(const NetSpec& net, const ReductionSchedule& sched) {
  check_schedule(net, sched);
  const unsigned m = net.m();
  std::vector<FieldMatrix> mats;
  mats.reserve(net.s());
  for (std::size_t j = 0; j < net.s(); ++j) {
    FieldMatrix c = net.matrix(j);
    const unsigned keep = m - std::min(m, sched[j]);
    for (unsigned r = 0; r < m; ++r)
      for (unsigned col = keep; col < m; ++col) c.set(r, col, 0);
    mats.push_back(std::move(c));
  }
  return NetSpec(net.base(), m, std::move(mats), Provenance::constructed);
}

NetSpec row_reduce(const NetSpec& net, const ReductionSchedule& sched) {
  check_schedule(net, sched);
  const unsigned m = net.m();
  std::vector<FieldMatrix> mats;
  mats.reserve(net.s());
  for (std::size_t j = 0; j < net.s(); ++j) {
    FieldMatrix c = net.matrix(j);
    const unsigned keep = m - std::min(m, sched[j]);
    for (unsigned r = keep; r < m; ++r)
      for (unsigned col = 0; col < m; ++col) c.set(r, col, 0);
    mats.push_back(std::move(c));
  }
  return NetSpec(net.base(), m, std::move(mats), Provenance::constructed);
}

ReductionSchedule infer_column_schedule(const NetSpec& net) {
  std::vector<unsigned> w(net.s());
  unsigned running = net.m();
  for (std::size_t j = net.s(); j-- > 0;) {
    running = std::min<unsigned>(running, static_cast<unsigned>(trailing_zero_columns(net.matrix(j))));
    w[j] = running;
  }
  w[0] = 0;
  return ReductionSchedule(std::move(w));
}

bool has_column_pattern(const NetSpec& net, const ReductionSchedule& sched) {
  if (sched.size() != net.s()) return false;
  for (std::size_t j = 0; j < net.s(); ++j)
    if (trailing_zero_columns(net.matrix(j)) < std::min(net.m(), sched[j])) return false;
  return true;
}

NetSpec leading_net(const NetSpec& net, unsigned m_prime) {
  if (m_prime < 1 || m_prime > net.m()) throw InvalidArgument("leading_net: m' out of range");
  std::vector<FieldMatrix> mats;
  mats.reserve(net.s());
  for (const auto& c : net.matrices()) mats.push_back(submatrix(c, 0, 0, m_prime, m_prime));
  return NetSpec(net.base(), m_prime, std::move(mats), Provenance::constructed);
}

namespace {

// Rank test for a (0,2)-sequence prefix: for every n <= m and d_1 + d_2 = n the
// first d_1 rows of D_1^{(n)} and first d_2 rows of D_2^{(n)} are independent.
bool is_zero_two_sequence_prefix(const FieldMatrix& d1, const FieldMatrix& d2, unsigned m) {
  for (unsigned n = 1; n <= m; ++n) {
    const FieldMatrix a = submatrix(d1, 0, 0, n, n);
    const FieldMatrix b = submatrix(d2, 0, 0, n, n);
    for (unsigned k = 0; k <= n; ++k) {
      const RowTake parts[] = {{&a, k}, {&b, n - k}};
      if (rank(stack_rows(parts)) != n) return false;
    }
  }
  return true;
}

void check_seed_matrices(const FieldMatrix& d, unsigned m) {
  if (d.rows() < m || d.cols() < m) throw InvalidArgument("seed matrix smaller than m x m");
}

FieldMatrix prepend_zero_columns(const FieldMatrix& d, unsigned t, unsigned m) {
  FieldMatrix c(d.base(), m, m);
  for (unsigned r = 0; r < m; ++r)
    for (unsigned col = t; col < m; ++col) c.set(r, col, d(r, col - t));
  return c;
}

}  // namespace

NetSpec prepend_zero_columns_seq(const FieldMatrix& d1, const FieldMatrix& d2, unsigned t,
                                 unsigned m) {
  if (t > m) throw InvalidArgument("prepend_zero_columns_seq: t > m");
  check_seed_matrices(d1, m);
  check_seed_matrices(d2, m);
  if (d1.base() != d2.base()) throw InvalidArgument("seed matrices have different bases");
  std::vector<FieldMatrix> mats{prepend_zero_columns(d1, t, m), prepend_zero_columns(d2, t, m)};
  std::optional<unsigned> declared;
  if (is_zero_two_sequence_prefix(d1, d2, m)) declared = t;
  return NetSpec(d1.base(), m, std::move(mats), Provenance::constructed, declared);
}

FieldMatrix block_diag_seq(const FieldMatrix& d2, unsigned t, unsigned m) {
  if (t > m) throw InvalidArgument("block_diag_seq: t > m");
  check_seed_matrices(d2, m);
  FieldMatrix e(d2.base(), m, m);
  for (unsigned r = 0; r < t; ++r)
    for (unsigned c = 0; c < t; ++c) e.set(r, c, d2(r, c));
  for (unsigned r = 0; r < m - t; ++r)
    for (unsigned c = 0; c < m - t; ++c) e.set(t + r, t + c, d2(r, c));
  return e;
}

NetSpec upper_sharp_net(const FieldMatrix& d1, const FieldMatrix& d2, unsigned t, unsigned m) {
  NetSpec lower = prepend_zero_columns_seq(d1, d2, t, m);
  std::vector<FieldMatrix> mats{lower.matrix(0), block_diag_seq(d2, t, m)};
  return NetSpec(d1.base(), m, std::move(mats), Provenance::constructed, lower.declared_t());
}

// Point generation ------------------------------------------------------------

std::vector<Digit> digits_of(std::uint64_t k, std::uint32_t b, unsigned m) {
  std::vector<Digit> d(m, 0);
  for (unsigned i = 0; i < m && k; ++i) {
    d[i] = static_cast<Digit>(k % b);
    k /= b;
  }
  return d;
}

namespace {

std::uint64_t numerator_of(std::span<const Digit> y, std::uint32_t b) {
  std::uint64_t num = 0;
  for (Digit d : y) num = num * b + d;  // y_1 is the most significant digit
  return num;
}

void check_digits(const FieldMatrix& c, unsigned digits) {
  if (c.rows() != c.cols()) throw InvalidArgument("generating matrix must be square");
  if (digits > c.cols()) throw InvalidArgument("requested more digits than the matrix has");
}

}  // namespace

namespace detail {

std::vector<std::uint64_t> generate_coordinate_naive(const FieldMatrix& c, unsigned digits) {
  check_digits(c, digits);
  const std::uint32_t b = c.base();
  const unsigned m = static_cast<unsigned>(c.cols());
  const std::uint64_t n = checked_pow(b, digits);
  std::vector<std::uint64_t> out(n);
  for (std::uint64_t k = 0; k < n; ++k) out[k] = numerator_of(mat_vec(c, digits_of(k, b, m)), b);
  return out;
}

}  // namespace detail

std::vector<std::uint64_t> generate_coordinate(const FieldMatrix& c, unsigned digits) {
  check_digits(c, digits);
  const std::uint32_t b = c.base();
  const unsigned m = static_cast<unsigned>(c.cols());
  const std::uint64_t n = checked_pow(b, digits);
  std::vector<std::uint64_t> out(n);
  if (n == 0) return out;
  out[0] = 0;

  if (b == 2) {
    // Column r as a packed numerator: row i contributes bit (m - 1 - i).
    std::vector<std::uint64_t> colv(digits, 0);
    for (unsigned r = 0; r < digits; ++r)
      for (unsigned i = 0; i < m; ++i)
        if (c(i, r)) colv[r] |= std::uint64_t{1} << (m - 1 - i);
    for (std::uint64_t k = 1; k < n; ++k)
      out[k] = out[k & (k - 1)] ^ colv[static_cast<unsigned>(std::countr_zero(k))];
    return out;
  }

  // Going from k to k+1 clears i trailing (b-1) digits and bumps digit i, which
  // adds col_i + sum_{r<i} col_r to the output digits (mod b).
  std::vector<std::vector<Digit>> step(digits, std::vector<Digit>(m, 0));
  std::vector<Digit> prefix(m, 0);
  for (unsigned i = 0; i < digits; ++i) {
    for (unsigned row = 0; row < m; ++row) step[i][row] = (prefix[row] + c(row, i)) % b;
    for (unsigned row = 0; row < m; ++row) prefix[row] = (prefix[row] + c(row, i)) % b;
  }
  std::vector<Digit> y(m, 0);
  std::vector<Digit> kd(digits, 0);
  for (std::uint64_t k = 1; k < n; ++k) {
    unsigned i = 0;
    while (kd[i] == b - 1) kd[i++] = 0;
    ++kd[i];
    const auto& add = step[i];
    for (unsigned row = 0; row < m; ++row) {
      const Digit v = y[row] + add[row];
      y[row] = v >= b ? v - b : v;
    }
    out[k] = numerator_of(y, b);
  }
  return out;
}

PointBlock generate_points(const NetSpec& net, unsigned first_digits) {
  if (first_digits > net.m()) throw InvalidArgument("generate_points: first_digits > m");
  const std::size_t s = net.s();
  const std::uint64_t n = checked_pow(net.base(), first_digits);
  std::vector<std::uint64_t> nums(n * s);
  for (std::size_t j = 0; j < s; ++j) {
    const auto col = generate_coordinate(net.matrix(j), first_digits);
    for (std::uint64_t k = 0; k < n; ++k) nums[k * s + j] = col[k];
  }
  return PointBlock(net.base(), net.m(), s, n, std::move(nums));
}

}  // namespace crnet
