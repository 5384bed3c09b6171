#pragma once

// Dense matrices over the prime field F_b.
//
// Entries are stored as digits in {0, ..., b-1}, row-major. Base 2 has a
// packed-row representation (gf2::PackedMatrix) that rank and mat_vec use
// automatically; the digit-array routines in detail:: serve every prime and
// act as the oracle for the packed path.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace crnet {

using Digit = std::uint32_t;

/// Trial division; bases are small.
bool is_prime(std::uint32_t b);

inline constexpr std::uint32_t kMaxBase = 65521;  // keeps digit products inside 32 bits

class FieldMatrix {
 public:
  /// Zero matrix. rows may be 0 (an empty row selection); cols must be >= 1.
  FieldMatrix(std::uint32_t base, std::size_t rows, std::size_t cols);
  FieldMatrix(std::uint32_t base, std::size_t rows, std::size_t cols, std::vector<Digit> entries);

  static FieldMatrix identity(std::uint32_t base, std::size_t n);
  static FieldMatrix from_rows(std::uint32_t base,
                               std::initializer_list<std::initializer_list<Digit>> rows);

  std::uint32_t base() const noexcept { return base_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  Digit operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Digit v);

  std::span<const Digit> row(std::size_t r) const {
    return {entries_.data() + r * cols_, cols_};
  }
  std::span<const Digit> entries() const noexcept { return entries_; }

  bool is_zero() const noexcept;

  friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;

 private:
  std::uint32_t base_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Digit> entries_;
};

/// One part of a row stacking: the first `count` rows of `matrix`.
struct RowTake {
  const FieldMatrix* matrix;
  std::size_t count;
};

/// F_b-rank by forward elimination.
std::size_t rank(const FieldMatrix& m);

/// First d_1 rows of part 1, then the first d_2 rows of part 2, ... A total of
/// zero rows yields a 0 x cols matrix.
FieldMatrix stack_rows(std::span<const RowTake> parts);

/// M * v over F_b.
std::vector<Digit> mat_vec(const FieldMatrix& m, std::span<const Digit> v);

FieldMatrix transpose(const FieldMatrix& m);
FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b);

/// Copy of the block starting at (row0, col0) with the given extent.
FieldMatrix submatrix(const FieldMatrix& m, std::size_t row0, std::size_t col0, std::size_t rows,
                      std::size_t cols);

/// Number of trailing all-zero columns.
std::size_t trailing_zero_columns(const FieldMatrix& m);

/// Multiplicative inverse of a nonzero digit modulo the prime b.
Digit inverse_mod(Digit a, std::uint32_t b);

namespace gf2 {

/// Base-2 matrix with each row packed into 64-bit words; column c of a row
/// lives in bit (c % 64) of word (c / 64).
class PackedMatrix {
 public:
  explicit PackedMatrix(const FieldMatrix& m);
  PackedMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return words_; }

  bool get(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool v);

  std::span<std::uint64_t> row(std::size_t r) { return {bits_.data() + r * words_, words_}; }
  std::span<const std::uint64_t> row(std::size_t r) const {
    return {bits_.data() + r * words_, words_};
  }

  FieldMatrix unpack() const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
};

std::size_t rank(PackedMatrix m);
std::vector<Digit> mat_vec(const PackedMatrix& m, std::span<const Digit> v);

}  // namespace gf2

namespace detail {
std::size_t rank_generic(const FieldMatrix& m);
std::vector<Digit> mat_vec_generic(const FieldMatrix& m, std::span<const Digit> v);
}  // namespace detail

}  // namespace crnet
