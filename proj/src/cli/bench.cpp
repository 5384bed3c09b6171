#include <algorithm>
#include <chrono>
#include <ostream>

#include "crnet/cli.hpp"
#include "crnet/errors.hpp"
#include "crnet/fast_product.hpp"
#include "crnet/kernels.hpp"

namespace crnet::cli {
namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point a, Clock::time_point b) {
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count();
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(ns));
}

std::uint64_t median(std::vector<std::uint64_t> v) {
  std::sort(v.begin(), v.end());
  const std::size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : v[h - 1] + (v[h] - v[h - 1]) / 2;
}

// Keeps the optimiser from discarding a product.
volatile double g_sink = 0.0;

}  // namespace

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
  if (cfg.repetitions < 3) throw InvalidArgument("bench needs at least 3 repetitions");
  if (cfg.m_list.empty() || cfg.s_list.empty()) throw InvalidArgument("bench needs m and s values");
  if (cfg.tau == 0) throw InvalidArgument("bench needs tau >= 1");
  if (cfg.w_scheme != "none" && cfg.w_scheme != "log2" && cfg.w_scheme != "log2sqrt")
    throw InvalidArgument("bench supports the none, log2 and log2sqrt schemes");
  const std::string backend(kernels::name(kernels::active().backend));
  const ProductOptions popt{cfg.threads};
  std::vector<BenchRecord> out;

  for (unsigned m : cfg.m_list) {
    for (std::size_t s : cfg.s_list) {
      const std::uint64_t n = checked_pow(cfg.b, m);
      // Point numerators plus the product and the fast path's work area.
      const long double bytes = static_cast<long double>(n) * 8.0L * (s + 2.0L * cfg.tau);
      if (bytes > static_cast<long double>(cfg.memory_cap_bytes))
        throw BudgetExceeded("bench configuration exceeds the memory cap",
                             static_cast<std::uint64_t>(std::min<long double>(bytes, 1.8e19L)),
                             cfg.memory_cap_bytes);

      const ReductionSchedule sched = schedule_from_scheme(cfg.w_scheme, cfg.b, m, s);
      const NetSpec net = column_reduce(random_net(cfg.b, m, s, cfg.seed), sched);
      const RealMatrix a = random_matrix(s, cfg.tau, cfg.seed);
      const OpCounts ops = op_count_model(cfg.b, m, sched.w(), cfg.tau);
      const std::size_t s_star = sched.s_star(m);

      auto run_fast = [&] {
        const auto t0 = Clock::now();
        const RealMatrix p = fast_reduced_product(net, sched, a, {}, popt);
        const auto t1 = Clock::now();
        g_sink = g_sink + p(n - 1, 0);
        return elapsed_ns(t0, t1);
      };
      auto run_standard = [&] {
        const auto t0 = Clock::now();
        const PointBlock pts = generate_points(net);
        const auto t1 = Clock::now();
        const RealMatrix p = standard_product(pts, a, {}, popt);
        const auto t2 = Clock::now();
        g_sink = g_sink + p(n - 1, 0);
        return std::pair{elapsed_ns(t0, t1), elapsed_ns(t1, t2)};
      };

      run_fast();
      run_standard();

      auto base = [&](const char* algo, int rep) {
        BenchRecord r{algo, cfg.b, m, s, s_star, cfg.tau, cfg.w_scheme, rep, 0, std::nullopt,
                      std::nullopt, 0, cfg.seed, cfg.threads, backend};
        r.predicted_ops = std::string(algo) == "fast_column" ? ops.fast : ops.standard + ops.point_gen;
        return r;
      };
      std::vector<std::uint64_t> fast_t, std_t, gen_t, mul_t;
      for (unsigned rep = 0; rep < cfg.repetitions; ++rep) {
        BenchRecord f = base("fast_column", static_cast<int>(rep));
        f.wall_ns = run_fast();
        fast_t.push_back(f.wall_ns);
        out.push_back(f);

        BenchRecord st = base("standard", static_cast<int>(rep));
        const auto [gen, mul] = run_standard();
        st.point_gen_ns = gen;
        st.multiply_ns = mul;
        st.wall_ns = gen + mul;
        std_t.push_back(st.wall_ns);
        gen_t.push_back(gen);
        mul_t.push_back(mul);
        out.push_back(st);
      }
      BenchRecord fm = base("fast_column", -1);
      fm.wall_ns = median(fast_t);
      out.push_back(fm);
      BenchRecord sm = base("standard", -1);
      sm.wall_ns = median(std_t);
      sm.point_gen_ns = median(gen_t);
      sm.multiply_ns = median(mul_t);
      out.push_back(sm);
    }
  }
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "algo,b,m,s,s_star,tau,w_scheme,rep,wall_ns,point_gen_ns,multiply_ns,predicted_ops,seed,"
         "threads,backend\n";
  for (const auto& r : records) {
    out << r.algo << ',' << r.b << ',' << r.m << ',' << r.s << ',' << r.s_star << ',' << r.tau
        << ',' << r.w_scheme << ',';
    if (r.rep < 0)
      out << "median";
    else
      out << r.rep;
    out << ',' << r.wall_ns << ',';
    if (r.point_gen_ns) out << *r.point_gen_ns;
    out << ',';
    if (r.multiply_ns) out << *r.multiply_ns;
    out << ',' << r.predicted_ops << ',' << r.seed << ',' << r.threads << ',' << r.backend << '\n';
  }
}

}  // namespace crnet::cli
