#pragma once

// Exact quality analysis of digital nets: the linear independence parameter,
// the reduced-net t-value bounds, and brute-force elementary-interval checks.
//
// Coordinate subsets are 0-based sorted index lists; an empty subset means
// "all coordinates".

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "crnet/errors.hpp"
#include "crnet/net.hpp"

namespace crnet {

using Subset = std::vector<std::size_t>;

Subset full_subset(std::size_t s);
/// Empty u becomes the full set; otherwise checks sorted, unique, in range.
Subset resolve_subset(const Subset& u, std::size_t s);

/// Calls fn for every k-element subset of {0, ..., s-1} in lexicographic order.
void for_each_subset(std::size_t s, std::size_t k, const std::function<void(const Subset&)>& fn);

/// Number of compositions of n into k nonnegative parts, saturating at 2^64 - 1.
std::uint64_t composition_count(unsigned n, std::size_t k);

/// Calls fn for every composition of n into k parts with each part <= cap. The
/// last part is loaded first: (0, ..., 0, n), (0, ..., 1, n-1), ... Stops early
/// when fn returns false; returns false in that case.
bool for_each_composition(unsigned n, std::size_t k, unsigned cap,
                          const std::function<bool(const std::vector<unsigned>&)>& fn);

/// Largest r such that every choice d_1 + ... + d_|u| = r of leading rows of the
/// matrices in u is linearly independent; 0 if a single row already fails.
unsigned rho(const NetSpec& net, const Subset& u = {},
             std::uint64_t budget = kDefaultEnumerationBudget);

/// max over m' <= m of (m' - rho of the leading m' x m' blocks): the t-value the
/// matrices have as a sequence prefix.
unsigned sequence_t(const NetSpec& net, const Subset& u = {},
                    std::uint64_t budget = kDefaultEnumerationBudget);

struct TheoremBounds {
  unsigned lower;          // max{0, m - w_ubar - t}
  unsigned upper;          // max{0, m - w_ubar}
  unsigned t_tilde_upper;  // min{m, w_ubar + t}
  unsigned strict_upper;   // max{0, m - max{t, w_ubar}}, valid for strict nets
};

/// Bounds on rho and on the t-value of a column-reduced net derived from a
/// sequence with quality t (per projection u, ubar = max u).
TheoremBounds theorem_bounds(unsigned t, unsigned m, const ReductionSchedule& sched,
                             const Subset& u = {});

/// Exhaustive elementary-interval test of the (t, m, |u|)-net property.
bool verify_tms_net(const PointBlock& points, unsigned t, const Subset& u = {},
                    std::uint64_t budget = kDefaultEnumerationBudget);

/// Smallest t for which verify_tms_net holds.
unsigned strict_t(const PointBlock& points, const Subset& u = {},
                  std::uint64_t budget = kDefaultEnumerationBudget);

struct ShapeVector {
  std::vector<unsigned> e;  // e_j >= 1, one per coordinate
};

/// All d with sum e_j d_j = target.
std::vector<std::vector<unsigned>> shape_solutions(const ShapeVector& e, unsigned target);

/// Exhaustive test of the (t, m, e, s)-net property. Vacuously true when no d
/// solves sum e_j d_j = m - t.
bool verify_tmes_net(const PointBlock& points, unsigned t, const ShapeVector& e,
                     std::uint64_t budget = kDefaultEnumerationBudget);

// Reports ---------------------------------------------------------------------

struct ProjectionQuality {
  Subset u;
  unsigned rho;
  unsigned t_rank;  // m - rho, the exact t-value of the projection
  std::optional<TheoremBounds> bounds;
};

struct QualityReport {
  std::uint32_t base;
  unsigned m;
  std::size_t s;
  unsigned rho;
  unsigned t_rank;
  std::optional<unsigned> t_exact;  // brute force, when requested and affordable
  unsigned t_upper;
  std::string t_upper_source;  // "theorem" or "rank"
  std::vector<ProjectionQuality> per_projection;
};

struct ReportOptions {
  std::size_t projection_cap = 4;
  bool brute_force = true;
  /// t of the unreduced net and the schedule used to reduce it; enables the
  /// theorem bounds.
  std::optional<unsigned> base_t;
  std::optional<ReductionSchedule> schedule;
  std::uint64_t budget = kDefaultEnumerationBudget;
};

QualityReport quality_report(const NetSpec& net, const ReportOptions& options = {});

/// Pretty-printed JSON; see README for the schema.
std::string to_json(const QualityReport& report);

}  // namespace crnet
