#include <CLI11.hpp>
#include <bit>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "crnet/cli.hpp"
#include "crnet/discrepancy.hpp"
#include "crnet/errors.hpp"
#include "crnet/fast_product.hpp"
#include "crnet/kernels.hpp"
#include "crnet/quality.hpp"

namespace crnet::cli {

std::uint64_t budget_from_env() {
  const char* v = std::getenv("CRNET_ENUM_BUDGET");
  if (!v || !*v) return kDefaultEnumerationBudget;
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v, &end, 10);
  if (*end || errno == ERANGE || x == 0)
    throw InvalidArgument(std::string("CRNET_ENUM_BUDGET must be a positive integer, got '") + v + "'");
  return x;
}

namespace {

template <class T>
std::vector<T> parse_uint_list(const std::string& text, const char* what) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    errno = 0;
    char* end = nullptr;
    if (item.empty() || item[0] == '-') throw ParseError(std::string(what) + ": bad entry '" + item + "'");
    const unsigned long long v = std::strtoull(item.c_str(), &end, 10);
    if (*end || errno == ERANGE) throw ParseError(std::string(what) + ": bad entry '" + item + "'");
    out.push_back(static_cast<T>(v));
  }
  if (out.empty()) throw ParseError(std::string(what) + ": empty list");
  return out;
}

// 1-based "1,3" to a sorted 0-based subset.
Subset parse_subset(const std::string& text, std::size_t s) {
  Subset u;
  for (auto v : parse_uint_list<std::size_t>(text, "--u")) {
    if (v < 1 || v > s) throw InvalidArgument("--u index out of range");
    u.push_back(v - 1);
  }
  return resolve_subset(u, s);
}

}  // namespace

ReductionSchedule schedule_from_scheme(const std::string& scheme, std::uint32_t b, unsigned m,
                                       std::size_t s, const std::optional<WeightModel>& weights) {
  std::vector<unsigned> w(s, 0);
  if (scheme == "none") {
  } else if (scheme.rfind("explicit:", 0) == 0) {
    w = parse_uint_list<unsigned>(scheme.substr(9), "explicit schedule");
    if (w.size() != s)
      throw InvalidArgument("explicit schedule has " + std::to_string(w.size()) +
                            " entries, net has s = " + std::to_string(s));
  } else if (scheme == "log2" || scheme == "log2sqrt") {
    for (std::size_t j = 1; j <= s; ++j) {
      unsigned e = static_cast<unsigned>(std::bit_width(j) - 1);
      if (scheme == "log2sqrt") e /= 2;
      w[j - 1] = std::min(e, m);
    }
  } else if (scheme == "kappa" || scheme == "zeta") {
    if (!weights) throw InvalidArgument("scheme " + scheme + " needs --weights");
    if (weights->size() != s) throw InvalidArgument("weights do not match the dimension");
    return choose_reduction_indices(*weights, b, m,
                                    scheme == "kappa" ? WeightScheme::kappa : WeightScheme::zeta);
  } else {
    throw ParseError("unknown reduction scheme '" + scheme + "'");
  }
  return ReductionSchedule(std::move(w));
}

namespace {

struct Output {
  explicit Output(const std::string& path, std::ostream& fallback, bool binary = false) {
    if (path.empty() || path == "-") {
      stream = &fallback;
    } else {
      file = std::make_unique<std::ofstream>(path, binary ? std::ios::binary : std::ios::out);
      if (!*file) throw InvalidArgument("cannot write '" + path + "'");
      stream = file.get();
    }
  }
  std::ostream& operator*() { return *stream; }
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream;
};

NetSpec read_net_arg(const std::string& path) {
  if (path == "-") return read_net(std::cin);
  return load_net(path);
}

struct WeightArgs {
  std::string spec;
  std::optional<double> kappa;
  double decay_tau = 1.5;

  void add(CLI::App* app) {
    app->add_option("--weights", spec, "const:<c>, poly:<p> or a comma-separated list");
    app->add_option("--kappa", kappa, "kappa for the kappa scheme");
    app->add_option("--decay-tau", decay_tau, "decay exponent in (1, 2) for the zeta scheme");
  }
  std::optional<WeightModel> model(std::size_t s) const {
    if (spec.empty()) return std::nullopt;
    return WeightModel::parse(spec, s, kappa, decay_tau);
  }
};

using Json = nlohmann::ordered_json;

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Column-reduced digital nets: construction, quality, bounds and fast products",
               "crnet"};
  app.require_subcommand(1, 1);
  std::string simd;
  std::optional<std::uint64_t> budget_flag;
  app.add_option("--simd", simd, "kernel backend: scalar, avx2 or neon");
  app.add_option("--budget", budget_flag, "enumeration budget (default: CRNET_ENUM_BUDGET or 1e7)");

  // gen
  auto* gen = app.add_subcommand("gen", "write generating matrices");
  std::uint32_t gen_b = 2;
  unsigned gen_m = 0;
  std::size_t gen_s = 0;
  std::string gen_source = "pascal", gen_out = "-";
  std::uint64_t gen_seed = 0;
  gen->add_option("--b", gen_b, "prime base");
  gen->add_option("--m", gen_m, "size exponent")->required();
  gen->add_option("--s", gen_s, "dimension")->required();
  gen->add_option("--source", gen_source, "pascal or random")
      ->check(CLI::IsMember({"pascal", "random"}));
  gen->add_option("--seed", gen_seed, "seed for --source random");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // reduce
  auto* red = app.add_subcommand("reduce", "zero trailing columns (or rows) of the matrices");
  std::string red_in, red_w, red_mode = "column", red_out = "-", red_sched_out;
  WeightArgs red_weights;
  red->add_option("--in", red_in, "net file")->required();
  red->add_option("--w", red_w, "none, explicit:<list>, log2, log2sqrt, kappa or zeta")->required();
  red->add_option("--mode", red_mode, "column or row")->check(CLI::IsMember({"column", "row"}));
  red->add_option("-o,--out", red_out, "output file (default stdout)");
  red->add_option("--schedule-out", red_sched_out, "also write the reduction indices here");
  red_weights.add(red);

  // points
  auto* pts = app.add_subcommand("points", "write the points of a net as CSV");
  std::string pts_in, pts_format = "fraction", pts_out = "-";
  std::optional<unsigned> pts_digits;
  pts->add_option("--in", pts_in, "net file")->required();
  pts->add_option("--first-digits", pts_digits, "enumerate k < b^digits (default m)");
  pts->add_option("--format", pts_format, "fraction or decimal")
      ->check(CLI::IsMember({"fraction", "decimal"}));
  pts->add_option("-o,--out", pts_out, "output file (default stdout)");

  // rho
  auto* rho_cmd = app.add_subcommand("rho", "quality report as JSON");
  std::string rho_in, rho_w, rho_u, rho_out = "-";
  std::size_t rho_cap = 4;
  bool rho_no_brute = false;
  std::optional<unsigned> rho_base_t;
  rho_cmd->add_option("--in", rho_in, "net file")->required();
  rho_cmd->add_option("--u", rho_u, "only report rho of this projection (1-based, e.g. 1,3)");
  rho_cmd->add_option("--cap", rho_cap, "largest projection size in the table");
  rho_cmd->add_flag("--no-brute-force", rho_no_brute, "skip the elementary-interval search");
  rho_cmd->add_option("--base-t", rho_base_t, "t of the unreduced net, enables theorem bounds");
  rho_cmd->add_option("--w", rho_w, "schedule used for the theorem bounds (default: inferred)");
  rho_cmd->add_option("-o,--out", rho_out, "output file (default stdout)");

  // tvalue
  auto* tv = app.add_subcommand("tvalue", "exact t-value by elementary-interval counting");
  std::string tv_in, tv_u, tv_out = "-";
  bool tv_no_brute = false;
  tv->add_option("--in", tv_in, "net file")->required();
  tv->add_option("--u", tv_u, "projection (1-based)");
  tv->add_flag("--no-brute-force", tv_no_brute, "only report the rank-based value");
  tv->add_option("-o,--out", tv_out, "output file (default stdout)");

  // disc-bound
  auto* db = app.add_subcommand("disc-bound", "weighted star discrepancy bound as JSON");
  std::string db_in, db_w, db_base_net, db_out = "-";
  std::optional<unsigned> db_base_t;
  std::size_t db_cap = 4;
  bool db_exact = false;
  WeightArgs db_weights;
  db->add_option("--in", db_in, "column-reduced net file")->required();
  db->add_option("--w", db_w, "schedule (default: inferred from zero columns)");
  db->add_option("--base-net", db_base_net, "unreduced net; t_u are computed from it");
  db->add_option("--base-t", db_base_t, "t value used for every projection");
  db->add_option("--cap", db_cap, "largest projection size in the third term");
  db->add_flag("--exact", db_exact, "also compute the weighted exact star discrepancy (small nets)");
  db_weights.add(db);

  db->add_option("-o,--out", db_out, "output file (default stdout)");

  // product
  auto* prod = app.add_subcommand("product", "compute phi(x_k)^T A for all points");
  std::string prod_in, prod_algo = "fast", prod_a, prod_transform = "identity", prod_w,
                       prod_format = "csv", prod_out = "-";
  std::optional<std::size_t> prod_a_random;
  std::uint64_t prod_seed = 0;
  unsigned prod_threads = 1;
  prod->add_option("--in", prod_in, "net file")->required();
  prod->add_option("--algo", prod_algo, "fast or standard")->check(CLI::IsMember({"fast", "standard"}));
  prod->add_option("--a", prod_a, "CSV file with the s x tau matrix A");
  prod->add_option("--a-random", prod_a_random, "use a random s x TAU matrix in [-1, 1)");
  prod->add_option("--seed", prod_seed, "seed for --a-random");
  prod->add_option("--transform", prod_transform, "identity, invnorm or invnorm:<eps>");
  prod->add_option("--w", prod_w, "schedule for the fast algorithm (default: inferred)");
  prod->add_option("--threads", prod_threads, "worker threads");
  prod->add_option("--format", prod_format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}));
  prod->add_option("-o,--out", prod_out, "output file (default stdout)");

  // bench
  auto* bench = app.add_subcommand("bench", "time the fast and standard products, CSV output");
  BenchConfig bc;
  std::string bench_m = "12", bench_s = "100,200,300,400,500,600,700,800", bench_out = "-";
  std::uint64_t bench_mem_mib = bc.memory_cap_bytes >> 20;
  bench->add_option("--b", bc.b, "prime base");
  bench->add_option("--m", bench_m, "size exponent or comma-separated list");
  bench->add_option("--tau", bc.tau, "columns of A");
  bench->add_option("--s-list", bench_s, "comma-separated dimensions");
  bench->add_option("--w-scheme", bc.w_scheme, "none, log2 or log2sqrt");
  bench->add_option("--seed", bc.seed, "seed for nets and A");
  bench->add_option("--reps", bc.repetitions, "timed repetitions (>= 3)");
  bench->add_option("--parallel", bc.threads, "worker threads");
  bench->add_option("--mem-cap-mib", bench_mem_mib, "refuse configurations above this memory");
  bench->add_option("-o,--out", bench_out, "output file (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (!simd.empty()) {
      kernels::Backend backend;
      if (!kernels::parse_backend(simd, backend)) throw InvalidArgument("unknown --simd backend");
      kernels::set_active(backend);
    }
    const std::uint64_t budget = budget_flag ? *budget_flag : budget_from_env();

    if (gen->parsed()) {
      const NetSpec net = gen_source == "pascal" ? pascal_net(gen_b, gen_m, gen_s)
                                                 : random_net(gen_b, gen_m, gen_s, gen_seed);
      Output o(gen_out, out);
      write_net(*o, net);
    } else if (red->parsed()) {
      const NetSpec net = read_net_arg(red_in);
      const ReductionSchedule sched =
          schedule_from_scheme(red_w, net.base(), net.m(), net.s(), red_weights.model(net.s()));
      const NetSpec reduced = red_mode == "column" ? column_reduce(net, sched) : row_reduce(net, sched);
      Output o(red_out, out);
      write_net(*o, reduced);
      if (!red_sched_out.empty()) {
        Output so(red_sched_out, out);
        for (std::size_t j = 0; j < sched.size(); ++j) *so << (j ? "," : "") << sched[j];
        *so << '\n';
      }
    } else if (pts->parsed()) {
      const NetSpec net = read_net_arg(pts_in);
      const unsigned digits = pts_digits.value_or(net.m());
      if (digits > net.m()) throw InvalidArgument("--first-digits exceeds m");
      Output o(pts_out, out);
      write_points_csv(*o, generate_points(net, digits),
                       pts_format == "fraction" ? PointFormat::fraction : PointFormat::decimal);
    } else if (rho_cmd->parsed()) {
      const NetSpec net = read_net_arg(rho_in);
      Output o(rho_out, out);
      if (!rho_u.empty()) {
        *o << "rho = " << rho(net, parse_subset(rho_u, net.s()), budget) << '\n';
      } else {
        ReportOptions opt;
        opt.projection_cap = rho_cap;
        opt.brute_force = !rho_no_brute;
        opt.budget = budget;
        if (rho_base_t) {
          opt.base_t = *rho_base_t;
          opt.schedule = rho_w.empty() ? infer_column_schedule(net)
                                       : schedule_from_scheme(rho_w, net.base(), net.m(), net.s());
        }
        *o << to_json(quality_report(net, opt));
      }
    } else if (tv->parsed()) {
      const NetSpec net = read_net_arg(tv_in);
      const Subset u = tv_u.empty() ? Subset{} : parse_subset(tv_u, net.s());
      std::optional<unsigned> t;
      if (!tv_no_brute) t = strict_t(generate_points(net), u, budget);
      const unsigned t_rank = net.m() - rho(net, u, budget);
      Output o(tv_out, out);
      if (t) *o << "t = " << *t << '\n';
      *o << "t_rank = " << t_rank << '\n';
    } else if (db->parsed()) {
      const NetSpec net = read_net_arg(db_in);
      const auto weights = db_weights.model(net.s());
      if (!weights) throw InvalidArgument("disc-bound needs --weights");
      const ReductionSchedule sched =
          db_w.empty() ? infer_column_schedule(net)
                       : schedule_from_scheme(db_w, net.base(), net.m(), net.s(), weights);
      if (!has_column_pattern(net, sched))
        throw InvalidArgument("net does not have the schedule's zero columns");
      ProjectionTValues tu;
      const std::size_t s_star = sched.s_star(net.m());
      if (!db_base_net.empty()) {
        const NetSpec base = read_net_arg(db_base_net);
        if (base.base() != net.base() || base.m() != net.m() || base.s() != net.s())
          throw InvalidArgument("--base-net does not match the reduced net's b, m, s");
        const std::size_t cap = std::min(db_cap, s_star);
        for (std::size_t j = 0; j < s_star; ++j) tu.t[{j}] = sequence_t(base, {j}, budget);
        for (std::size_t k = 2; k <= cap; ++k)
          for_each_subset(s_star, k, [&](const Subset& u) { tu.t[u] = sequence_t(base, u, budget); });
      } else if (db_base_t) {
        tu.default_t = *db_base_t;
      } else {
        throw InvalidArgument("disc-bound needs --base-net or --base-t");
      }
      const GlobalBound g = global_disc_bound(tu, sched, *weights, net.base(), net.m(), db_cap, budget);
      Json j;
      j["bound"] = g.value;
      j["term_outside"] = g.term_outside ? Json(*g.term_outside) : Json(nullptr);
      j["term_single"] = g.term_single;
      j["term_multi"] = g.term_multi;
      j["s_star"] = g.s_star;
      if (db_exact) {
        const PointBlock points = generate_points(net);
        double worst = 0.0;
        for (std::size_t k = 1; k <= std::min<std::size_t>(3, net.s()); ++k)
          for_each_subset(net.s(), k, [&](const Subset& u) {
            worst = std::max(worst, weights->gamma_u(u) * exact_star_discrepancy(points, u));
          });
        j["weighted_exact_up_to_3"] = worst;
      }
      Output o(db_out, out);
      *o << j.dump(2) << '\n';
    } else if (prod->parsed()) {
      const NetSpec net = read_net_arg(prod_in);
      RealMatrix a;
      if (!prod_a.empty() == prod_a_random.has_value())
        throw InvalidArgument("give exactly one of --a and --a-random");
      a = prod_a_random ? random_matrix(net.s(), *prod_a_random, prod_seed) : load_matrix_csv(prod_a);
      TransformSpec phi;
      if (prod_transform == "identity") {
        phi = TransformSpec::identity();
      } else if (prod_transform == "invnorm") {
        phi = TransformSpec::inverse_normal();
      } else if (prod_transform.rfind("invnorm:", 0) == 0) {
        const std::string eps_text = prod_transform.substr(8);
        char* end = nullptr;
        const double eps = std::strtod(eps_text.c_str(), &end);
        if (eps_text.empty() || *end) throw ParseError("bad inverse normal shift '" + eps_text + "'");
        phi = TransformSpec::inverse_normal(eps);
      } else {
        throw ParseError("unknown transform '" + prod_transform + "'");
      }
      const ProductOptions popt{prod_threads};
      RealMatrix p;
      if (prod_algo == "fast") {
        const ReductionSchedule sched =
            prod_w.empty() ? infer_column_schedule(net)
                           : schedule_from_scheme(prod_w, net.base(), net.m(), net.s());
        p = fast_reduced_product(net, sched, a, phi, popt);
      } else {
        p = standard_product(generate_points(net), a, phi, popt);
      }
      Output o(prod_out, out, prod_format == "bin");
      if (prod_format == "csv")
        write_matrix_csv(*o, p);
      else
        write_matrix_binary(*o, p);
    } else if (bench->parsed()) {
      bc.m_list = parse_uint_list<unsigned>(bench_m, "--m");
      bc.s_list = parse_uint_list<std::size_t>(bench_s, "--s-list");
      bc.memory_cap_bytes = bench_mem_mib << 20;
      const auto records = run_bench(bc);
      Output o(bench_out, out);
      write_bench_csv(*o, records);
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace crnet::cli
