#pragma once

// Products x_k^T A of net points with a real s x tau matrix: the plain
// row-by-row product and the fast product for column-reduced nets, which
// exploits that coordinate j only depends on the first m - w_j digits of k.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crnet/net.hpp"

namespace crnet {

/// Dense row-major matrix of doubles.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> entries() const noexcept { return data_; }
  double* data() noexcept { return data_.data(); }

  bool all_finite() const;

  friend bool operator==(const RealMatrix&, const RealMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Identity matrix of size n.
RealMatrix identity_matrix(std::size_t n);

/// Entries lo + (hi - lo) u with u = (x >> 11) 2^-53 for successive outputs x of
/// std::mt19937_64(seed), row-major.
RealMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo = -1.0,
                         double hi = 1.0);

/// Inverse of the standard normal CDF for p in (0, 1). Rational approximation
/// with relative error below 1.2e-9 over the whole range.
double inverse_normal_cdf(double p);

/// Componentwise map phi applied to every coordinate before multiplying.
struct TransformSpec {
  enum class Kind { identity, inverse_normal, table };

  Kind kind = Kind::identity;
  /// Right shift for inverse_normal; empty means b^{-m-1}.
  std::optional<double> epsilon;
  /// For Kind::table: phi(num / b^m) = values[num], exactly b^m entries.
  std::vector<double> values;

  static TransformSpec identity() { return {}; }
  static TransformSpec inverse_normal(std::optional<double> epsilon = std::nullopt);
  static TransformSpec table(std::vector<double> values);
};

/// phi(x) for x = numerator / b^m, the single evaluation point used by both products.
class PointTransform {
 public:
  PointTransform(const TransformSpec& spec, std::uint32_t base, unsigned m);
  double operator()(std::uint64_t numerator) const;

 private:
  TransformSpec spec_;
  double den_;
  double eps_;
};

struct ProductOptions {
  /// Worker threads; 1 runs inline. Output does not depend on this value.
  unsigned threads = 1;
};

/// Row k is phi(x_k)^T A, accumulated over j = 1, ..., s in that order.
RealMatrix standard_product(const PointBlock& points, const RealMatrix& a,
                            const TransformSpec& transform = {},
                            const ProductOptions& options = {});

/// The product over all b^m points of a column-reduced net, generating the
/// needed coordinate blocks internally. Rejects nets whose matrices do not have
/// the last min(m, w_j) columns zero.
RealMatrix fast_reduced_product(const NetSpec& net, const ReductionSchedule& sched,
                                const RealMatrix& a, const TransformSpec& transform = {},
                                const ProductOptions& options = {});

struct OpCounts {
  std::uint64_t fast;       // sum over w_j < m of b^{m-w_j} (tau + m (m - w_j))
  std::uint64_t standard;   // b^m s tau
  std::uint64_t point_gen;  // b^m s m^2
};

/// Operation counts with unit constants. w may be any nonnegative list of
/// length s; throws InvalidArgument on overflow.
OpCounts op_count_model(std::uint32_t b, unsigned m, std::span<const unsigned> w, std::size_t tau);

/// Mean of f over the rows of the fast product.
double qmc_estimate(const NetSpec& net, const ReductionSchedule& sched, const RealMatrix& a,
                    const TransformSpec& transform,
                    const std::function<double(std::span<const double>)>& f);

// Formats ---------------------------------------------------------------------

/// Comma-separated rows of numbers; a first line with any non-numeric field is
/// treated as a header and skipped.
RealMatrix read_matrix_csv(std::istream& in);
RealMatrix load_matrix_csv(const std::string& path);

/// %.17g values, one row per line, no header.
void write_matrix_csv(std::ostream& out, const RealMatrix& m);

/// 16-byte header (uint64 rows, uint64 cols) followed by row-major doubles, all
/// little-endian.
void write_matrix_binary(std::ostream& out, const RealMatrix& m);
RealMatrix read_matrix_binary(std::istream& in);

}  // namespace crnet
