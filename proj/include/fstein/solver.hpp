#pragma once

// Solutions of the Stein equation (P/p) f' + f = h - P(h) on (c_P, inf) and
// the bounds of Proposition 1 on them.

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fstein/law.hpp"
#include "fstein/quadrature.hpp"

namespace fstein {

struct TestFunction {
  enum class Kind { indicator_halfline, indicator_set, lipschitz };

  Kind kind = Kind::lipschitz;
  RealFunction h;
  std::vector<double> breakpoints;  // discontinuities or kinks of h
  std::string label;
  double z = 0.0;                                    // half-line threshold
  std::vector<std::pair<double, double>> intervals;  // closed intervals of a set indicator

  /// 1[x <= z]
  static TestFunction halfline(double z);
  /// 1[x in union of [lo, hi]]
  static TestFunction set(std::vector<std::pair<double, double>> intervals);
  static TestFunction lipschitz(RealFunction h, std::string label, std::vector<double> breakpoints = {});
};

/// f_h through cumulative panel integrals of h p over a quantile grid of P.
/// Below the median of P the left representation of f_h is used, above it
/// the right one.
class SteinSolution {
 public:
  SteinSolution(std::shared_ptr<const Law> P, TestFunction h, const QuadratureConfig& cfg = {});

  const Law& reference() const { return *P_; }
  const TestFunction& test_function() const { return h_; }
  double mean_h() const { return mean_h_; }
  double median() const { return median_; }

  double evaluate(double x) const;
  /// (P/p) f_h' obtained from the Stein equation: h - P(h) - f_h.
  double derivative_form(double x) const;
  std::vector<double> evaluate_on_grid(std::span<const double> xs) const;

 private:
  double left_integral(double x) const;   // int_c^x h p
  double right_integral(double x) const;  // int_x^inf h p
  double panel(double a, double b) const;

  std::shared_ptr<const Law> P_;
  TestFunction h_;
  QuadratureConfig cfg_;
  std::vector<double> knots_;  // c (if finite) ... last probe; panels between, plus a tail panel
  std::vector<double> left_;   // left_[k] = int_c^{knots_[k]} h p
  std::vector<double> right_;  // right_[k] = int_{knots_[k]}^inf h p
  double mean_h_ = 0.0;
  double median_ = 0.0;
};

SteinSolution solve(std::shared_ptr<const Law> P, TestFunction h, const QuadratureConfig& cfg = {});

/// f_{1[. <= z]}(x) = P(x ^ z) Pbar(x v z) / P(x). Throws for z <= c_P.
double indicator_solution(const Law& P, double z, double x);
/// (P/p) f' for the indicator solution, differentiated in closed form.
double indicator_derivative_form(const Law& P, double z, double x);

/// A_p f = (P/p) f' + f on (c_P, inf), zero elsewhere; `derivative_form`
/// supplies (P/p) f'.
double stein_operator(const Law& P, const RealFunction& f, const RealFunction& derivative_form, double x);

struct Envelope {
  double m = 0.0;   // P(|x - id|)
  double e1 = 0.0;  // (P ^ Pbar) / P
  double e2 = 0.0;  // (int_c^x P ^ int_x^inf Pbar) / P
};

Envelope envelope(const Law& P, double x, const QuadratureConfig& cfg = {});
std::vector<Envelope> envelope_on_grid(const Law& P, std::span<const double> xs, const QuadratureConfig& cfg = {});

/// Quantile-spaced grid between the 1e-6 and 1 - 1e-6 quantiles.
std::vector<double> quantile_grid(const Law& P, int count);

struct PropositionCheck {
  std::string item;           // "item1", "item2", "item3", "stein-identity"
  std::string test_function;
  std::string quantity;       // "|f|" or "(P/p)|f'|" or "|P(A_p f)|"
  double max_slack = 0.0;     // max over the grid of observed - bound
  int violations = 0;
};

struct Proposition1Report {
  std::string law;
  int grid_size = 0;
  std::vector<PropositionCheck> checks;
  double stein_identity_max = 0.0;
  int total_violations = 0;
  std::vector<std::string> notes;

  bool passed() const { return total_violations == 0; }
  std::string to_text() const;
};

Proposition1Report verify_proposition1(std::shared_ptr<const Law> P, int grid_size = 1000,
                                       const QuadratureConfig& cfg = {});

}  // namespace fstein
