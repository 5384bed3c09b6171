#pragma once

// Digital nets over F_b: generating matrices, reduction schedules and exact
// point generation.
//
// Digit vectors are least-significant digit first: k = sum_i k_i b^i maps to
// (k_0, ..., k_{m-1}). Coordinate x_{k,j} is stored exactly as the integer
// numerator sum_i (C_j k)_i b^{m-1-i} over the denominator b^m.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crnet/gf_matrix.hpp"

namespace crnet {

/// b^e, throwing InvalidArgument if the result does not fit in 63 bits.
std::uint64_t checked_pow(std::uint64_t b, unsigned e);

enum class Provenance { pascal, random, file, constructed };
std::string to_string(Provenance p);

class NetSpec {
 public:
  NetSpec(std::uint32_t base, unsigned m, std::vector<FieldMatrix> matrices, Provenance provenance,
          std::optional<unsigned> declared_t = std::nullopt,
          std::optional<std::uint64_t> seed = std::nullopt);

  std::uint32_t base() const noexcept { return base_; }
  unsigned m() const noexcept { return m_; }
  std::size_t s() const noexcept { return matrices_.size(); }
  std::uint64_t num_points() const { return checked_pow(base_, m_); }

  const std::vector<FieldMatrix>& matrices() const noexcept { return matrices_; }
  const FieldMatrix& matrix(std::size_t j) const { return matrices_.at(j); }

  std::optional<unsigned> declared_t() const noexcept { return declared_t_; }
  Provenance provenance() const noexcept { return provenance_; }
  /// Seed for Provenance::random, empty otherwise.
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

  /// Equality of the mathematical content (base, m, matrices).
  bool same_matrices(const NetSpec& other) const;

 private:
  std::uint32_t base_;
  unsigned m_;
  std::vector<FieldMatrix> matrices_;
  Provenance provenance_;
  std::optional<unsigned> declared_t_;
  std::optional<std::uint64_t> seed_;
};

/// Reduction indices 0 = w_1 <= w_2 <= ... <= w_s.
class ReductionSchedule {
 public:
  explicit ReductionSchedule(std::vector<unsigned> w);
  static ReductionSchedule none(std::size_t s);

  std::span<const unsigned> w() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  unsigned operator[](std::size_t j) const { return w_.at(j); }
  unsigned back() const { return w_.back(); }

  /// Number of leading coordinates with w_j < m, written s*.
  std::size_t s_star(unsigned m) const;

  friend bool operator==(const ReductionSchedule&, const ReductionSchedule&) = default;

 private:
  std::vector<unsigned> w_;
};

/// N x s block of exact coordinates, row-major; value = numerator / b^m.
class PointBlock {
 public:
  PointBlock(std::uint32_t base, unsigned m, std::size_t s, std::size_t rows,
             std::vector<std::uint64_t> numerators);

  std::uint32_t base() const noexcept { return base_; }
  unsigned m() const noexcept { return m_; }
  std::size_t s() const noexcept { return s_; }
  std::size_t rows() const noexcept { return rows_; }
  std::uint64_t denominator() const noexcept { return denominator_; }

  std::uint64_t operator()(std::size_t k, std::size_t j) const { return nums_[k * s_ + j]; }
  double value(std::size_t k, std::size_t j) const {
    return static_cast<double>(nums_[k * s_ + j]) / static_cast<double>(denominator_);
  }
  std::span<const std::uint64_t> row(std::size_t k) const { return {nums_.data() + k * s_, s_}; }
  std::span<const std::uint64_t> numerators() const noexcept { return nums_; }
  std::vector<std::uint64_t> column(std::size_t j) const;

  friend bool operator==(const PointBlock&, const PointBlock&) = default;

 private:
  std::uint32_t base_;
  unsigned m_;
  std::size_t s_;
  std::size_t rows_;
  std::uint64_t denominator_;
  std::vector<std::uint64_t> nums_;
};

/// Upper-triangular Pascal matrix, entry (i, r) = binom(r, i) mod b (0-based).
FieldMatrix pascal_matrix(std::uint32_t b, unsigned n);

/// C_1 = I, C_j = P^{j-1} for the Pascal matrix P. declared_t = 0 for s <= 2.
NetSpec pascal_net(std::uint32_t b, unsigned m, std::size_t s);

/// i.i.d. uniform digits from std::mt19937_64(seed), drawn matrix by matrix in
/// row-major order. Each digit takes one 64-bit output and rejects values at or
/// above the largest multiple of b below 2^64, then reduces modulo b.
NetSpec random_net(std::uint32_t b, unsigned m, std::size_t s, std::uint64_t seed);

/// Zero the last min(m, w_j) columns of C_j.
NetSpec column_reduce(const NetSpec& net, const ReductionSchedule& sched);
/// Zero the last min(m, w_j) rows of C_j.
NetSpec row_reduce(const NetSpec& net, const ReductionSchedule& sched);

/// Largest schedule compatible with the zero columns of the net: w_1 = 0 and
/// w_j = min over j' >= j of the trailing zero column count of C_{j'}.
ReductionSchedule infer_column_schedule(const NetSpec& net);

/// True when every C_j has its last min(m, w_j) columns zero.
bool has_column_pattern(const NetSpec& net, const ReductionSchedule& sched);

/// Net generated by the upper-left m' x m' blocks.
NetSpec leading_net(const NetSpec& net, unsigned m_prime);

/// s = 2 net with C_j = [0_{m x t} | left m x (m - t) block of D_j]. If D_1, D_2
/// pass the (0,2)-sequence rank test on their leading blocks up to m, the
/// result carries declared_t = t.
NetSpec prepend_zero_columns_seq(const FieldMatrix& d1, const FieldMatrix& d2, unsigned t,
                                 unsigned m);

/// m x m matrix with D_2^{(t)} top-left, D_2^{(m-t)} bottom-right, zeros elsewhere.
FieldMatrix block_diag_seq(const FieldMatrix& d2, unsigned t, unsigned m);

/// The s = 2 net (E_1, E_2): E_1 from prepend_zero_columns_seq, E_2 from
/// block_diag_seq. A strict (t,2)-sequence prefix when D_1, D_2 are (0,2).
NetSpec upper_sharp_net(const FieldMatrix& d1, const FieldMatrix& d2, unsigned t, unsigned m);

/// Numerators of one coordinate for k = 0 .. b^digits - 1, digit vectors padded
/// with zeros to length m. Uses the XOR recurrence for b = 2 and an incremental
/// digit update otherwise.
std::vector<std::uint64_t> generate_coordinate(const FieldMatrix& c, unsigned digits);

namespace detail {
/// Per-point mat_vec; the reference for generate_coordinate.
std::vector<std::uint64_t> generate_coordinate_naive(const FieldMatrix& c, unsigned digits);
}  // namespace detail

/// Points k = 0 .. b^first_digits - 1 of the net.
PointBlock generate_points(const NetSpec& net, unsigned first_digits);
inline PointBlock generate_points(const NetSpec& net) { return generate_points(net, net.m()); }

/// Least-significant-first base-b digits of k, length m.
std::vector<Digit> digits_of(std::uint64_t k, std::uint32_t b, unsigned m);

// Text formats --------------------------------------------------------------

/// Line 1 "b m s", then for each matrix m lines of m space-separated digits.
void write_net(std::ostream& out, const NetSpec& net);
NetSpec read_net(std::istream& in);
NetSpec load_net(const std::string& path);
void save_net(const std::string& path, const NetSpec& net);

enum class PointFormat { fraction, decimal };
/// CSV with header k,x1,...,xs. fraction writes "num/b^m"; decimal writes %.17g.
void write_points_csv(std::ostream& out, const PointBlock& points,
                      PointFormat format = PointFormat::fraction);

}  // namespace crnet
