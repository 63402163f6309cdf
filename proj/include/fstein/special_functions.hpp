#pragma once

// Gamma-family kernels. All functions are pure and thread-safe.

namespace fstein::special {

/// log Gamma(x) for x > 0.
double ln_gamma(double x);

/// Gamma(x) for x not a non-positive integer. Negative arguments go through
/// the reflection formula. Arguments above 171 overflow a double and are
/// rejected; use ln_gamma / ln_gamma_ratio there.
double gamma(double x);

/// Upper incomplete gamma Gamma(s, x) = int_x^inf t^(s-1) e^-t dt.
/// Any real s is accepted for x > 0; x == 0 requires s > 0.
double upper_incomplete_gamma(double s, double x);

/// log(Gamma(a) / Gamma(b)) for a, b > 0, evaluated in log space.
double ln_gamma_ratio(double a, double b);

}  // namespace fstein::special
