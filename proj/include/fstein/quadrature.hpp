#pragma once

#include <functional>
#include <span>
#include <vector>

namespace fstein {

using RealFunction = std::function<double(double)>;

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_subdivisions = 2000;
  int probe_points = 256;  // sign-change probes for kink detection

  /// Throws Error(invalid_parameter) unless tolerances > 0 and budgets >= 1.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions_used = 0;
  std::vector<double> kinks;  // split points found by sign-change detection
};

/// Globally adaptive Gauss-Kronrod (10/21) integration of f over [a, b].
///
/// Either end may be infinite: a half-line [a, inf) is mapped through
/// x = a + s t / (1 - t) with s = max(1, |a|), and symmetrically for -inf.
/// `breakpoints` inside (a, b) seed the initial panels; the subdivision
/// budget is shared across all panels. Values with |f| < 1e-300 count as 0.
///
/// Throws AccuracyError (carrying the best estimate) when the budget runs
/// out before error_estimate <= max(abs_tol, rel_tol |value|).
QuadratureResult integrate(const RealFunction& f, double a, double b,
                           const QuadratureConfig& cfg = {},
                           std::span<const double> breakpoints = {});

/// Roots of s located by sign changes between consecutive probe points
/// (sorted ascending), each refined to ~1e-13 relative. Exact zeros at a
/// probe count as roots. Roots between two same-sign probes are missed.
std::vector<double> find_sign_changes(const RealFunction& s, std::span<const double> probes);

/// Convenience overload that builds the probe grid itself: log-spaced when
/// the range is positive and spans decades (or b is infinite), uniform
/// otherwise.
std::vector<double> find_sign_changes(const RealFunction& s, double a, double b, int probes);

/// Integral of |s| over [a, b] with the interval split at the sign changes
/// of s found on `probes` (plus any extra breakpoints). Kinks are reported.
QuadratureResult integrate_abs(const RealFunction& s, double a, double b,
                               const QuadratureConfig& cfg = {},
                               std::span<const double> probes = {});

/// Root of f in [lo, hi] given f(lo) and f(hi) of opposite sign (Brent's
/// method with bisection safeguard). Throws Error(inversion) otherwise.
double brent_root(const RealFunction& f, double lo, double hi, double rel_tol = 1e-14);

std::vector<double> log_spaced(double lo, double hi, int count);
std::vector<double> lin_spaced(double lo, double hi, int count);

}  // namespace fstein
