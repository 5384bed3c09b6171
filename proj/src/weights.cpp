#include <cerrno>
#include <cmath>
#include <cstdlib>

#include "crnet/discrepancy.hpp"

namespace crnet {
namespace {

double parse_number(const std::string& s, const std::string& context) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  if (b == std::string::npos) throw ParseError(context + ": empty number");
  const std::string t = s.substr(b, e - b + 1);
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v))
    throw ParseError(context + ": bad number '" + t + "'");
  return v;
}

}  // namespace

WeightModel::WeightModel(std::vector<double> gammas, std::optional<double> kappa, double decay_tau)
    : gammas_(std::move(gammas)), kappa_(kappa), decay_tau_(decay_tau) {
  if (gammas_.empty()) throw InvalidArgument("weights: need at least one weight");
  for (std::size_t j = 0; j < gammas_.size(); ++j) {
    if (!(gammas_[j] > 0.0) || !std::isfinite(gammas_[j]))
      throw InvalidArgument("weights must be positive and finite");
    if (j && gammas_[j] > gammas_[j - 1]) throw InvalidArgument("weights must be nonincreasing");
  }
  if (kappa_ && !(*kappa_ > 0.0)) throw InvalidArgument("kappa must be positive");
  if (!std::isfinite(decay_tau_)) throw InvalidArgument("decay_tau must be finite");
}

WeightModel WeightModel::parse(const std::string& text, std::size_t s, std::optional<double> kappa,
                               double decay_tau) {
  if (s == 0) throw InvalidArgument("weights: dimension must be >= 1");
  std::vector<double> g;
  if (text.rfind("const:", 0) == 0) {
    const double c = parse_number(text.substr(6), "weights const");
    g.assign(s, c);
  } else if (text.rfind("poly:", 0) == 0) {
    const double p = parse_number(text.substr(5), "weights poly");
    if (p < 0) throw ParseError("weights poly: exponent must be >= 0");
    g.resize(s);
    for (std::size_t j = 0; j < s; ++j) g[j] = std::pow(static_cast<double>(j + 1), -p);
  } else {
    std::size_t start = 0;
    for (;;) {
      const auto comma = text.find(',', start);
      g.push_back(parse_number(text.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start),
                               "weights list"));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (g.size() != s)
      throw ParseError("weights list has " + std::to_string(g.size()) + " values, expected " +
                       std::to_string(s));
  }
  try {
    return WeightModel(std::move(g), kappa, decay_tau);
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

double WeightModel::gamma_u(const Subset& u) const {
  double g = 1.0;
  for (auto j : u) g *= gamma(j);
  return g;
}

std::size_t WeightModel::j_zero() const {
  std::size_t j = 0;
  while (j < gammas_.size() && gammas_[j] > 1.0) ++j;
  return j;
}

WeightModel WeightModel::scaled(double c) const {
  std::vector<double> g = gammas_;
  for (double& x : g) x *= c;
  return WeightModel(std::move(g), kappa_, decay_tau_);
}

long long floor_log(double y, std::uint32_t b) {
  if (!(y > 0.0) || !std::isfinite(y)) throw InvalidArgument("floor_log: argument must be positive");
  const double bd = b;
  long long e = static_cast<long long>(std::floor(std::log(y) / std::log(bd)));
  auto power = [&](long long k) { return std::pow(bd, static_cast<double>(k)); };
  while (power(e + 1) <= y) ++e;
  while (power(e) > y) --e;
  return e;
}

ReductionSchedule choose_reduction_indices(const WeightModel& weights, std::uint32_t b, unsigned m,
                                           WeightScheme scheme) {
  const std::size_t s = weights.size();
  std::vector<unsigned> w(s, 0);
  auto clamp = [m](long long e) -> unsigned {
    if (e < 0) return 0;
    return static_cast<unsigned>(std::min<long long>(e, m));
  };
  if (scheme == WeightScheme::kappa) {
    if (!weights.kappa()) throw InvalidArgument("kappa scheme needs kappa");
    const double kappa = *weights.kappa();
    const double floor_kappa = std::pow(weights.gamma(0), static_cast<double>(weights.j_zero()));
    if (!(kappa > floor_kappa)) throw InvalidArgument("kappa must exceed gamma_1^{j_0}");
    const double root = std::pow(kappa / floor_kappa, 1.0 / static_cast<double>(s)) - 1.0;
    if (!(root > 0.0)) throw InvalidArgument("kappa too close to gamma_1^{j_0} for this dimension");
    for (std::size_t j = 0; j < s; ++j) w[j] = clamp(floor_log(root / weights.gamma(j), b));
  } else {
    const double tau = weights.decay_tau();
    if (!(tau > 1.0 && tau < 2.0)) throw InvalidArgument("zeta scheme needs decay_tau in (1, 2)");
    for (std::size_t j = 0; j < s; ++j) {
      const double jj = static_cast<double>(j + 1);
      if (std::abs(weights.gamma(j) * jj * jj - 1.0) > 1e-12)
        throw InvalidArgument("zeta scheme needs gamma_j = j^-2");
      w[j] = clamp(floor_log(std::pow(jj, 2.0 - tau), b));
    }
  }
  w[0] = 0;
  for (std::size_t j = 1; j < s; ++j)
    if (w[j] < w[j - 1]) throw InvalidArgument("weights produce decreasing reduction indices");
  return ReductionSchedule(std::move(w));
}

double zeta(double x) {
  if (!(x > 1.0)) throw InvalidArgument("zeta: argument must exceed 1");
  constexpr long long n = 1'000'000;
  // Neumaier summation of 1^-x .. (n-1)^-x, smallest terms first.
  double sum = 0.0, comp = 0.0;
  for (long long j = n - 1; j >= 1; --j) {
    const double term = std::pow(static_cast<double>(j), -x);
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term))
      comp += (sum - t) + term;
    else
      comp += (term - t) + sum;
    sum = t;
  }
  const double nd = static_cast<double>(n);
  const double tail = std::pow(nd, 1.0 - x) / (x - 1.0) + 0.5 * std::pow(nd, -x) +
                      x * std::pow(nd, -x - 1.0) / 12.0;
  return sum + (comp + tail);
}

std::vector<double> zeta_product_prefixes(const WeightModel& weights,
                                          const ReductionSchedule& sched, std::uint32_t b) {
  if (weights.size() < sched.size()) throw InvalidArgument("fewer weights than coordinates");
  std::vector<double> out(sched.size());
  double p = 1.0;
  for (std::size_t j = 0; j < sched.size(); ++j) {
    const double factor = weights.gamma(j) * std::pow(static_cast<double>(b), sched[j]);
    p *= 1.0 + factor;
    out[j] = p;
  }
  return out;
}

ZetaCheck zeta_product_check(const WeightModel& weights, const ReductionSchedule& sched,
                             std::uint32_t b) {
  const auto prefixes = zeta_product_prefixes(weights, sched, b);
  return {prefixes.back(), std::exp(zeta(weights.decay_tau()))};
}

}  // namespace crnet
