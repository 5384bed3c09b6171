#include "crnet/fast_product.hpp"

#include <cmath>
#include <random>

#include "crnet/errors.hpp"
#include "crnet/kernels.hpp"
#include "crnet/parallel.hpp"

namespace crnet {

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) throw InvalidArgument("RealMatrix: entry count != rows * cols");
}

bool RealMatrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

RealMatrix identity_matrix(std::size_t n) {
  RealMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
  return out;
}

RealMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double lo,
                         double hi) {
  std::mt19937_64 gen(seed);
  RealMatrix out(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
      out(r, c) = lo + (hi - lo) * u;
    }
  return out;
}

namespace {

void check_factor(const RealMatrix& a, std::size_t s) {
  if (a.rows() != s) throw InvalidArgument("A must have one row per coordinate");
  if (a.cols() == 0) throw InvalidArgument("A must have at least one column");
  if (!a.all_finite()) throw InvalidArgument("A has non-finite entries");
}

// dst[i] = src[i] + scalar * vec[i]; inline form for very short runs, rounding
// exactly like the kernels.
inline void add_scaled_run(double* dst, const double* src, const double* vec, double scalar,
                           std::size_t n, const kernels::KernelTable& k) {
  if (n >= 8) {
    k.add_scaled(dst, src, vec, scalar, n);
    return;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double prod = scalar * vec[i];
    dst[i] = src[i] + prod;
  }
}

}  // namespace

RealMatrix standard_product(const PointBlock& points, const RealMatrix& a,
                            const TransformSpec& transform, const ProductOptions& options) {
  check_factor(a, points.s());
  const PointTransform phi(transform, points.base(), points.m());
  const std::size_t tau = a.cols();
  const auto& k = kernels::active();
  RealMatrix out(points.rows(), tau);
  parallel_for(points.rows(), options.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double* dst = out.row(r).data();
      for (std::size_t j = 0; j < points.s(); ++j)
        add_scaled_run(dst, dst, a.row(j).data(), phi(points(r, j)), tau, k);
    }
  });
  return out;
}

RealMatrix fast_reduced_product(const NetSpec& net, const ReductionSchedule& sched,
                                const RealMatrix& a, const TransformSpec& transform,
                                const ProductOptions& options) {
  const std::size_t s = net.s();
  const unsigned m = net.m();
  if (sched.size() != s) throw InvalidArgument("schedule length != dimension");
  if (!has_column_pattern(net, sched))
    throw InvalidArgument("net matrices do not match the schedule's zero columns");
  check_factor(a, s);

  const std::uint32_t b = net.base();
  const std::size_t n = net.num_points();
  const std::size_t tau = a.cols();
  const std::size_t s_star = sched.s_star(m);
  const PointTransform phi(transform, b, m);

  // X_j over the first m - w_j digits, already transformed.
  std::vector<std::vector<double>> x(s_star);
  std::vector<std::size_t> len(s_star + 1);
  for (std::size_t j = 0; j < s_star; ++j) {
    const auto nums = generate_coordinate(net.matrix(j), m - sched[j]);
    x[j].resize(nums.size());
    for (std::size_t k = 0; k < nums.size(); ++k) x[j][k] = phi(nums[k]);
    len[j] = nums.size();
  }
  len[s_star] = 1;
  const double phi0 = phi(0);

  // Column-major work area, one column of A at a time, so each block update is a
  // contiguous run.
  std::vector<double> work(n * tau);
  const auto& kt = kernels::active();
  parallel_for(tau, options.threads, [&](std::size_t c0, std::size_t c1) {
    for (std::size_t c = c0; c < c1; ++c) {
      double* p = work.data() + c * n;
      double start = 0.0;
      for (std::size_t j = s_star; j < s; ++j) {
        const double prod = phi0 * a(j, c);
        start = start + prod;
      }
      p[0] = start;
      for (std::size_t j = s_star; j-- > 0;) {
        const std::size_t block = len[j + 1];
        const std::size_t total = len[j];
        const double aj = a(j, c);
        const double* xj = x[j].data();
        for (std::size_t q = block; q < total; q += block)
          add_scaled_run(p + q, p, xj + q, aj, block, kt);
        add_scaled_run(p, p, xj, aj, block, kt);
      }
      if (s_star == 0)
        for (std::size_t k = 1; k < n; ++k) p[k] = start;
    }
  });

  RealMatrix out(n, tau);
  for (std::size_t c = 0; c < tau; ++c) {
    const double* p = work.data() + c * n;
    for (std::size_t k = 0; k < n; ++k) out(k, c) = p[k];
  }
  return out;
}

OpCounts op_count_model(std::uint32_t b, unsigned m, std::span<const unsigned> w,
                        std::size_t tau) {
  auto mul = [](std::uint64_t x, std::uint64_t y) {
    std::uint64_t r;
    if (__builtin_mul_overflow(x, y, &r)) throw InvalidArgument("op_count_model overflow");
    return r;
  };
  auto add = [](std::uint64_t x, std::uint64_t y) {
    std::uint64_t r;
    if (__builtin_add_overflow(x, y, &r)) throw InvalidArgument("op_count_model overflow");
    return r;
  };
  const std::uint64_t n = checked_pow(b, m);
  OpCounts out{0, mul(mul(n, w.size()), tau), mul(mul(n, w.size()), std::uint64_t{m} * m)};
  for (unsigned wj : w) {
    if (wj >= m) continue;
    const unsigned digits = m - wj;
    out.fast = add(out.fast, mul(checked_pow(b, digits), add(tau, std::uint64_t{m} * digits)));
  }
  return out;
}

double qmc_estimate(const NetSpec& net, const ReductionSchedule& sched, const RealMatrix& a,
                    const TransformSpec& transform,
                    const std::function<double(std::span<const double>)>& f) {
  const RealMatrix p = fast_reduced_product(net, sched, a, transform);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.rows(); ++k) sum += f(p.row(k));
  return sum / static_cast<double>(p.rows());
}

}  // namespace crnet
