#pragma once

// Weighted star discrepancy: local discrepancy, an exact small-scale star
// discrepancy, the coefficients and bounds for column-reduced nets, product
// weights, and the reduction-index choosers.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crnet/errors.hpp"
#include "crnet/net.hpp"
#include "crnet/quality.hpp"

namespace crnet {

using Rational = boost::multiprecision::cpp_rational;

/// Fraction of points with y_j < x_j for all j in u, minus prod_{j in u} x_j.
/// x has one entry per element of u, each in (0, 1]. The count is divided by the
/// number of rows of the block (b^m for a full net).
double local_discrepancy(const PointBlock& points, const Subset& u, std::span<const double> x);

struct StarDiscrepancyLimits {
  std::size_t max_dims = 3;
  std::size_t max_points = 4096;
  std::uint64_t max_work = std::uint64_t{1} << 31;
};

/// sup over x in (0,1]^|u| of |local_discrepancy|, evaluated exactly on the grid
/// of distinct coordinates plus 1 with both one-sided limits at each corner.
double exact_star_discrepancy(const PointBlock& points, const Subset& u = {},
                              const StarDiscrepancyLimits& limits = {});

/// a_{v,b}^{(k)} for v = 0, ..., k - 1, exact. Requires k >= 2.
std::vector<Rational> avb_coefficients_exact(std::uint32_t b, std::size_t k);
std::vector<double> avb_coefficients(std::uint32_t b, std::size_t k);

/// Upper bound on the star discrepancy of one projection of a reduced net:
/// 1 outside [s*], b^t / b^m for |u| = 1, and (b^t / b^m) sum_v a_v m^v otherwise.
double projection_disc_bound(std::uint32_t b, unsigned m, unsigned t, std::size_t u_size,
                             bool in_sstar);

// Weights ---------------------------------------------------------------------

/// Product weights gamma_1 >= gamma_2 >= ... > 0.
class WeightModel {
 public:
  WeightModel(std::vector<double> gammas, std::optional<double> kappa = std::nullopt,
              double decay_tau = 1.5);

  /// "const:<c>", "poly:<p>" (gamma_j = j^{-p}) or a comma-separated list of s values.
  static WeightModel parse(const std::string& text, std::size_t s,
                           std::optional<double> kappa = std::nullopt, double decay_tau = 1.5);

  std::size_t size() const noexcept { return gammas_.size(); }
  double gamma(std::size_t j) const { return gammas_.at(j); }  // 0-based
  double gamma_u(const Subset& u) const;
  std::span<const double> gammas() const noexcept { return gammas_; }
  std::optional<double> kappa() const noexcept { return kappa_; }
  double decay_tau() const noexcept { return decay_tau_; }

  /// Number of weights above 1: the minimal j_0 with gamma_j <= 1 for j > j_0.
  std::size_t j_zero() const;

  /// Same model with every gamma_j multiplied by c.
  WeightModel scaled(double c) const;

 private:
  std::vector<double> gammas_;
  std::optional<double> kappa_;
  double decay_tau_;
};

enum class WeightScheme { kappa, zeta };

/// Reduction indices from the weights. kappa: w_j = min(floor(log_b(((kappa /
/// gamma_1^{j_0})^{1/s} - 1) / gamma_j)), m); zeta (gamma_j = j^{-2}):
/// w_j = min(floor(log_b j^{2 - decay_tau}), m). Negative values clamp to 0 and
/// w_1 is set to 0.
ReductionSchedule choose_reduction_indices(const WeightModel& weights, std::uint32_t b, unsigned m,
                                           WeightScheme scheme);

/// floor(log_b(y)) for y > 0, corrected against repeated multiplication so
/// exact powers of b land on the right integer.
long long floor_log(double y, std::uint32_t b);

/// Riemann zeta for x > 1: partial sum to 10^6 terms plus an Euler-Maclaurin tail.
double zeta(double x);

struct ZetaCheck {
  double product;  // prod_j (1 + gamma_j b^{w_j})
  double bound;    // exp(zeta(decay_tau))
};
ZetaCheck zeta_product_check(const WeightModel& weights, const ReductionSchedule& sched,
                             std::uint32_t b);
/// prod_{j <= s'} (1 + gamma_j b^{w_j}) for every s' = 1, ..., s.
std::vector<double> zeta_product_prefixes(const WeightModel& weights,
                                          const ReductionSchedule& sched, std::uint32_t b);

// Global bound ----------------------------------------------------------------

/// Quality parameters t_u of the projections of the unreduced net, keyed by
/// 0-based subsets. default_t, when set, is used for any subset not listed.
struct ProjectionTValues {
  std::map<Subset, unsigned> t;
  std::optional<unsigned> default_t;

  unsigned at(const Subset& u) const;
};

struct GlobalBound {
  double value;
  std::optional<double> term_outside;  // max over u not inside [s*]; absent when s = s*
  double term_single;                   // max_{j <= s*} gamma_j b^{min(m, w_j + t_j)} / b^m
  double term_multi;                    // max over 2 <= |u| <= cap, u inside [s*]
  std::size_t s_star;
};

/// Weighted star discrepancy bound of the column-reduced net with schedule
/// sched. Subsets of [s*] with more than proj_cap elements are not included.
GlobalBound global_disc_bound(const ProjectionTValues& t_u, const ReductionSchedule& sched,
                              const WeightModel& weights, std::uint32_t b, unsigned m,
                              std::size_t proj_cap = 4,
                              std::uint64_t budget = kDefaultEnumerationBudget);

}  // namespace crnet
