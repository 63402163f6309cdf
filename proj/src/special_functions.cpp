#include "fstein/special_functions.hpp"

#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>
#include <string>

#include "fstein/error.hpp"

namespace fstein::special {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && std::floor(x) == x; }

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::domain, "ln_gamma: argument must be positive and finite, got " +
                                       std::to_string(x));
  }
  // lgamma_r avoids the global signgam write of plain lgamma.
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double gamma(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::domain, "gamma: non-finite argument");
  }
  if (is_nonpositive_integer(x)) {
    throw Error(ErrorCode::pole, "gamma: pole at non-positive integer " + std::to_string(x));
  }
  if (x > 171.0) {
    throw Error(ErrorCode::domain, "gamma: argument above 171 overflows, use ln_gamma");
  }
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x)
    const double s = std::sin(std::numbers::pi * x);
    return std::numbers::pi / (s * std::tgamma(1.0 - x));
  }
  return std::tgamma(x);
}

double upper_incomplete_gamma(double s, double x) {
  if (!std::isfinite(s) || !(x >= 0.0)) {
    throw Error(ErrorCode::domain, "upper_incomplete_gamma: need finite s and x >= 0");
  }
  if (x == 0.0) {
    if (s <= 0.0) {
      throw Error(ErrorCode::divergent, "upper_incomplete_gamma: Gamma(s, 0) diverges for s <= 0");
    }
    return gamma(s);
  }
  if (std::isinf(x)) return 0.0;
  if (s > 0.0) return boost::math::tgamma(s, x);

  // Downward recurrence Gamma(s, x) = (Gamma(s+1, x) - x^s e^-x) / s, started
  // either from E1(x) = Gamma(0, x) or from the first positive s + k.
  const double k = std::ceil(-s);
  double start = s + k;  // in [0, 1)
  double value = start == 0.0 ? boost::math::expint(1, x) : boost::math::tgamma(start, x);
  const double log_x = std::log(x);
  for (int i = 0; i < static_cast<int>(k); ++i) {
    const double a = start - 1.0;  // value currently holds Gamma(start, x)
    value = (value - std::exp(a * log_x - x)) / a;
    start = a;
  }
  return value;
}

double ln_gamma_ratio(double a, double b) { return ln_gamma(a) - ln_gamma(b); }

}  // namespace fstein::special
