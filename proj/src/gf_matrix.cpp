#include "crnet/gf_matrix.hpp"

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "crnet/errors.hpp"

namespace crnet {

bool is_prime(std::uint32_t b) {
  if (b < 2) return false;
  for (std::uint32_t d = 2; d * d <= b; ++d)
    if (b % d == 0) return false;
  return true;
}

namespace {

void check_base(std::uint32_t base) {
  if (base > kMaxBase || !is_prime(base))
    throw InvalidArgument("base " + std::to_string(base) + " is not a supported prime");
}

}  // namespace

FieldMatrix::FieldMatrix(std::uint32_t base, std::size_t rows, std::size_t cols)
    : base_(base), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
  check_base(base);
  if (cols == 0) throw InvalidArgument("matrix needs at least one column");
}

FieldMatrix::FieldMatrix(std::uint32_t base, std::size_t rows, std::size_t cols,
                         std::vector<Digit> entries)
    : base_(base), rows_(rows), cols_(cols), entries_(std::move(entries)) {
  check_base(base);
  if (cols == 0) throw InvalidArgument("matrix needs at least one column");
  if (entries_.size() != rows * cols)
    throw InvalidArgument("entry count " + std::to_string(entries_.size()) + " != " +
                          std::to_string(rows) + "x" + std::to_string(cols));
  for (Digit d : entries_)
    if (d >= base) throw InvalidArgument("entry " + std::to_string(d) + " not a digit in base " +
                                         std::to_string(base));
}

FieldMatrix FieldMatrix::identity(std::uint32_t base, std::size_t n) {
  FieldMatrix m(base, n, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

FieldMatrix FieldMatrix::from_rows(std::uint32_t base,
                                   std::initializer_list<std::initializer_list<Digit>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.begin()->size() : 0;
  std::vector<Digit> e;
  e.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw InvalidArgument("ragged row list");
    e.insert(e.end(), row.begin(), row.end());
  }
  return FieldMatrix(base, r, c, std::move(e));
}

void FieldMatrix::set(std::size_t r, std::size_t c, Digit v) {
  if (r >= rows_ || c >= cols_) throw InvalidArgument("matrix index out of range");
  if (v >= base_) throw InvalidArgument("entry not a digit in this base");
  entries_[r * cols_ + c] = v;
}

bool FieldMatrix::is_zero() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](Digit d) { return d == 0; });
}

Digit inverse_mod(Digit a, std::uint32_t b) {
  // Extended Euclid on (a, b); b prime so gcd is 1 for a != 0.
  std::int64_t t = 0, new_t = 1, r = b, new_r = a % b;
  if (new_r == 0) throw InvalidArgument("zero has no inverse");
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (t < 0) t += b;
  return static_cast<Digit>(t);
}

namespace detail {

std::size_t rank_generic(const FieldMatrix& m) {
  const std::uint32_t b = m.base();
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Digit> a(m.entries().begin(), m.entries().end());
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank)
      std::swap_ranges(a.begin() + pivot * cols, a.begin() + (pivot + 1) * cols,
                       a.begin() + rank * cols);
    const Digit inv = inverse_mod(a[rank * cols + c], b);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const Digit lead = a[r * cols + c];
      if (lead == 0) continue;
      // row_r -= (lead / pivot) * row_rank
      const Digit f = static_cast<Digit>((std::uint64_t{lead} * inv) % b);
      for (std::size_t k = c; k < cols; ++k) {
        const Digit sub = static_cast<Digit>((std::uint64_t{f} * a[rank * cols + k]) % b);
        a[r * cols + k] = (a[r * cols + k] + b - sub) % b;
      }
    }
    ++rank;
  }
  return rank;
}

std::vector<Digit> mat_vec_generic(const FieldMatrix& m, std::span<const Digit> v) {
  if (v.size() != m.cols()) throw InvalidArgument("mat_vec: vector length != matrix columns");
  const std::uint32_t b = m.base();
  std::vector<Digit> out(m.rows(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (v[c] >= b) throw InvalidArgument("mat_vec: vector entry is not a digit");
      acc = (acc + std::uint64_t{m(r, c)} * v[c]) % b;
    }
    out[r] = static_cast<Digit>(acc);
  }
  return out;
}

}  // namespace detail

namespace gf2 {

PackedMatrix::PackedMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), words_((cols + 63) / 64), bits_(rows * words_, 0) {}

PackedMatrix::PackedMatrix(const FieldMatrix& m) : PackedMatrix(m.rows(), m.cols()) {
  if (m.base() != 2) throw InvalidArgument("packed representation requires base 2");
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (m(r, c)) bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
}

void PackedMatrix::set(std::size_t r, std::size_t c, bool v) {
  auto& w = bits_[r * words_ + c / 64];
  const std::uint64_t mask = std::uint64_t{1} << (c % 64);
  w = v ? (w | mask) : (w & ~mask);
}

FieldMatrix PackedMatrix::unpack() const {
  FieldMatrix m(2, rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c)
      if (get(r, c)) m.set(r, c, 1);
  return m;
}

std::size_t rank(PackedMatrix m) {
  const std::size_t rows = m.rows(), words = m.words_per_row();
  std::size_t rank = 0;
  for (std::size_t w = 0; w < words && rank < rows; ++w) {
    for (unsigned bit = 0; bit < 64 && rank < rows; ++bit) {
      const std::uint64_t mask = std::uint64_t{1} << bit;
      std::size_t pivot = rank;
      while (pivot < rows && !(m.row(pivot)[w] & mask)) ++pivot;
      if (pivot == rows) continue;
      if (pivot != rank) std::swap_ranges(m.row(pivot).begin(), m.row(pivot).end(),
                                          m.row(rank).begin());
      const auto prow = m.row(rank);
      for (std::size_t r = rank + 1; r < rows; ++r) {
        auto row = m.row(r);
        if (row[w] & mask)
          for (std::size_t k = w; k < words; ++k) row[k] ^= prow[k];
      }
      ++rank;
    }
  }
  return rank;
}

std::vector<Digit> mat_vec(const PackedMatrix& m, std::span<const Digit> v) {
  if (v.size() != m.cols()) throw InvalidArgument("mat_vec: vector length != matrix columns");
  PackedMatrix packed_v(1, m.cols());
  for (std::size_t c = 0; c < v.size(); ++c) {
    if (v[c] > 1) throw InvalidArgument("mat_vec: vector entry is not a digit");
    packed_v.set(0, c, v[c] != 0);
  }
  const auto vw = packed_v.row(0);
  std::vector<Digit> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::uint64_t acc = 0;
    const auto row = m.row(r);
    for (std::size_t k = 0; k < m.words_per_row(); ++k) acc ^= row[k] & vw[k];
    out[r] = static_cast<Digit>(std::popcount(acc) & 1);
  }
  return out;
}

}  // namespace gf2

std::size_t rank(const FieldMatrix& m) {
  if (m.rows() == 0) return 0;
  if (m.base() == 2) return gf2::rank(gf2::PackedMatrix(m));
  return detail::rank_generic(m);
}

FieldMatrix stack_rows(std::span<const RowTake> parts) {
  if (parts.empty()) throw InvalidArgument("stack_rows: no parts");
  const std::uint32_t base = parts.front().matrix->base();
  const std::size_t cols = parts.front().matrix->cols();
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (p.matrix->base() != base) throw InvalidArgument("stack_rows: mismatched bases");
    if (p.matrix->cols() != cols) throw InvalidArgument("stack_rows: mismatched column counts");
    if (p.count > p.matrix->rows()) throw InvalidArgument("stack_rows: row count exceeds part");
    total += p.count;
  }
  std::vector<Digit> e;
  e.reserve(total * cols);
  for (const auto& p : parts) {
    const auto src = p.matrix->entries();
    e.insert(e.end(), src.begin(), src.begin() + static_cast<std::ptrdiff_t>(p.count * cols));
  }
  return FieldMatrix(base, total, cols, std::move(e));
}

std::vector<Digit> mat_vec(const FieldMatrix& m, std::span<const Digit> v) {
  if (m.base() == 2) return gf2::mat_vec(gf2::PackedMatrix(m), v);
  return detail::mat_vec_generic(m, v);
}

FieldMatrix transpose(const FieldMatrix& m) {
  if (m.rows() == 0) throw InvalidArgument("transpose of a matrix without rows");
  FieldMatrix t(m.base(), m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t.set(c, r, m(r, c));
  return t;
}

FieldMatrix multiply(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.base() != b.base()) throw InvalidArgument("multiply: mismatched bases");
  if (a.cols() != b.rows()) throw InvalidArgument("multiply: inner dimensions differ");
  const std::uint32_t base = a.base();
  std::vector<Digit> e(a.rows() * b.cols(), 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) acc = (acc + std::uint64_t{a(r, k)} * b(k, c)) % base;
      e[r * b.cols() + c] = static_cast<Digit>(acc);
    }
  return FieldMatrix(base, a.rows(), b.cols(), std::move(e));
}

FieldMatrix submatrix(const FieldMatrix& m, std::size_t row0, std::size_t col0, std::size_t rows,
                      std::size_t cols) {
  if (row0 + rows > m.rows() || col0 + cols > m.cols())
    throw InvalidArgument("submatrix extends past the matrix");
  FieldMatrix out(m.base(), rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.set(r, c, m(row0 + r, col0 + c));
  return out;
}

std::size_t trailing_zero_columns(const FieldMatrix& m) {
  std::size_t n = 0;
  for (std::size_t c = m.cols(); c-- > 0;) {
    for (std::size_t r = 0; r < m.rows(); ++r)
      if (m(r, c) != 0) return n;
    ++n;
  }
  return n;
}

}  // namespace crnet
