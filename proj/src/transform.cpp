#include <cmath>

#include "crnet/errors.hpp"
#include "crnet/fast_product.hpp"

namespace crnet {

// P. J. Acklam's rational approximation with the central region |p - 1/2| <=
// 0.47575 and two tail regions.
double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("inverse_normal_cdf: p must lie in (0, 1)");
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  auto tail = [&](double q) {
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  };
  if (p < p_low) return tail(std::sqrt(-2.0 * std::log(p)));
  if (p > 1.0 - p_low) return -tail(std::sqrt(-2.0 * std::log1p(-p)));
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

TransformSpec TransformSpec::inverse_normal(std::optional<double> epsilon) {
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0))
    throw InvalidArgument("inverse normal shift must lie in (0, 1)");
  TransformSpec t;
  t.kind = Kind::inverse_normal;
  t.epsilon = epsilon;
  return t;
}

TransformSpec TransformSpec::table(std::vector<double> values) {
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidArgument("transform table has a non-finite value");
  TransformSpec t;
  t.kind = Kind::table;
  t.values = std::move(values);
  return t;
}

PointTransform::PointTransform(const TransformSpec& spec, std::uint32_t base, unsigned m)
    : spec_(spec), den_(static_cast<double>(checked_pow(base, m))), eps_(0.0) {
  switch (spec.kind) {
    case TransformSpec::Kind::identity:
      break;
    case TransformSpec::Kind::inverse_normal:
      eps_ = spec.epsilon ? *spec.epsilon : 1.0 / (den_ * base);
      // The largest point is 1 - b^{-m}; the shifted value has to stay below 1.
      if (!(1.0 - 1.0 / den_ + eps_ < 1.0))
        throw InvalidArgument("inverse normal shift pushes points to 1");
      break;
    case TransformSpec::Kind::table:
      if (spec.values.size() != checked_pow(base, m))
        throw InvalidArgument("transform table needs exactly b^m values");
      break;
  }
}

double PointTransform::operator()(std::uint64_t numerator) const {
  switch (spec_.kind) {
    case TransformSpec::Kind::identity:
      return static_cast<double>(numerator) / den_;
    case TransformSpec::Kind::inverse_normal:
      return inverse_normal_cdf(static_cast<double>(numerator) / den_ + eps_);
    case TransformSpec::Kind::table:
      return spec_.values[numerator];
  }
  return 0.0;
}

}  // namespace crnet
