#pragma once

// Regular-variation diagnostics evaluated on analytic functions: tail-index
// estimation from f(tx)/f(t), the Karamata ratio, Potter-type envelopes and
// the n(1 - F(a_n)) -> 1 condition.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fstein/law.hpp"
#include "fstein/quadrature.hpp"

namespace fstein {

/// 20 points log-spaced over [1e2, t_max].
std::vector<double> default_t_grid(double t_max = 1e6);
/// 41 points log-spaced over [1e-2, 1e2].
std::vector<double> default_x_grid();

/// Least-squares slope of log(f(tx)/f(t)) against log x, averaged over the
/// top quartile of t_grid. Throws Error(domain) if a probed f is not
/// positive and finite.
double estimate_index(const RealFunction& f, std::span<const double> t_grid, std::span<const double> x_grid);

/// t f(t) / (1 - F(t)) along t_grid; tends to alpha for F in DA(alpha).
/// Stops at the first t where the survival or density underflows, with a
/// message in `warnings`.
std::vector<double> karamata_limit(const Law& F, std::span<const double> t_grid,
                                   std::vector<std::string>* warnings = nullptr);

struct PotterViolation {
  double t = 0.0;
  double x = 0.0;
  double bound = 0.0;
  double observed = 0.0;
  std::string form;  // "small-x" or "drees"
};

struct PotterFit {
  double c = 0.0;        // f(tx)/f(t) <= c x^(rho - delta), x <= 1
  double epsilon = 0.0;  // |f(tx)/f(t) - x^rho| <= eps max(x^(rho+delta), x^(rho-delta))
};

/// Probes both envelopes at every (t, x) with t >= t_min, skipping tx
/// outside the support. c is fitted on the largest-t slice (and is at least
/// 1, the ratio at x = 1); epsilon on the smallest-t slice, so a violation
/// means the ratio moved away from x^rho as t grew. Fitted constants only
/// test the form of the bound.
std::vector<PotterViolation> potter_check(const RealFunction& f, double rho, double delta, double t_min,
                                          std::span<const double> t_grid, std::span<const double> x_grid,
                                          PotterFit* fit = nullptr);

/// (n, n (1 - F(a_n))) with a_n from scaling_sequence.
std::vector<std::pair<std::uint64_t, double>> da_check(const Law& F, std::span<const std::uint64_t> n_grid,
                                                        ScalingMode mode = ScalingMode::table);
/// Same with a caller-supplied normalizing sequence.
std::vector<std::pair<std::uint64_t, double>> da_check(const Law& F, std::span<const std::uint64_t> n_grid,
                                                        const std::function<double(std::uint64_t)>& a_n);

struct RVOptions {
  double t_max = 1e6;
  double potter_delta = 0.5;
  std::vector<std::uint64_t> n_grid = {10, 100, 1000, 10000, 100000, 1000000};
  ScalingMode scaling = ScalingMode::table;
};

/// Diagnostics for the reverse hazard r_F, which lies in RV_{-alpha-1}.
struct RVReport {
  std::string law;
  std::optional<double> alpha;
  double estimated_index = 0.0;  // of r_F
  std::vector<double> t_grid;
  std::vector<double> x_grid;
  std::vector<std::vector<double>> ratio_table;  // r_F(t x) / r_F(t), rows over t
  std::vector<double> karamata_ratio;            // over t_grid (may be shorter)
  PotterFit potter_fit;
  std::vector<PotterViolation> potter_violations;
  std::vector<std::pair<std::uint64_t, double>> n_tail_check;
  std::vector<std::string> notes;

  /// CSV sections separated by "# <name>" lines.
  std::string to_csv() const;
};

RVReport rv_report(const Law& F, const RVOptions& opts = {});

}  // namespace fstein
