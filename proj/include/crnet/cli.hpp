#pragma once

// Command-line front end. run_cli is the whole program minus process setup, so
// tests can drive it in-process.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crnet/discrepancy.hpp"
#include "crnet/net.hpp"

namespace crnet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitBudget = 3;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Enumeration budget from CRNET_ENUM_BUDGET, else the library default.
std::uint64_t budget_from_env();

/// Schedule from a scheme string: none, explicit:<w1,...,ws>, log2
/// (w_j = min(floor(log2 j), m)), log2sqrt (min(floor(log2 sqrt j), m)), kappa
/// and zeta (need weights).
ReductionSchedule schedule_from_scheme(const std::string& scheme, std::uint32_t b, unsigned m,
                                       std::size_t s,
                                       const std::optional<WeightModel>& weights = std::nullopt);

// Benchmark harness -----------------------------------------------------------

struct BenchConfig {
  std::uint32_t b = 2;
  std::vector<unsigned> m_list{12};
  std::size_t tau = 20;
  std::vector<std::size_t> s_list{100, 200, 300, 400, 500, 600, 700, 800};
  std::string w_scheme = "log2";
  std::uint64_t seed = 1;
  unsigned repetitions = 5;
  unsigned threads = 1;
  std::uint64_t memory_cap_bytes = std::uint64_t{2} << 30;
};

struct BenchRecord {
  std::string algo;  // "fast_column" or "standard"
  std::uint32_t b;
  unsigned m;
  std::size_t s;
  std::size_t s_star;
  std::size_t tau;
  std::string w_scheme;
  int rep;  // -1 marks the median summary row
  std::uint64_t wall_ns;
  std::optional<std::uint64_t> point_gen_ns;  // standard only
  std::optional<std::uint64_t> multiply_ns;   // standard only
  std::uint64_t predicted_ops;
  std::uint64_t seed;
  unsigned threads;
  std::string backend;
};

/// Runs every (m, s) configuration: one discarded warm-up, then `repetitions`
/// timed runs per algorithm, then one median row per algorithm.
std::vector<BenchRecord> run_bench(const BenchConfig& config);

/// Header: algo,b,m,s,s_star,tau,w_scheme,rep,wall_ns,point_gen_ns,multiply_ns,
/// predicted_ops,seed,threads,backend. rep is "median" on summary rows.
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace crnet::cli
