#pragma once

// Univariate laws of the form F(x) = f0 + int_c^x f(u) du on [c, inf), with f
// continuous and strictly positive on (c, inf). The starting mass f0 sits at
// the left endpoint c, which may be -inf.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fstein/quadrature.hpp"

namespace fstein {

using ParamList = std::map<std::string, std::string, std::less<>>;

class Law {
 public:
  virtual ~Law() = default;

  virtual std::string label() const = 0;
  virtual double left_endpoint() const = 0;
  virtual double starting_mass() const { return 0.0; }

  virtual double cdf(double x) const = 0;
  virtual double pdf(double x) const = 0;
  /// 1 - cdf(x), computed without cancellation in the right tail.
  virtual double survival(double x) const { return 1.0 - cdf(x); }
  virtual double log_cdf(double x) const;
  virtual double log_pdf(double x) const;

  /// Reverse hazard rate pdf/cdf on (c, inf), 0 at or below c.
  virtual double reverse_hazard(double x) const;

  /// Generalized inverse of the cdf on (0, 1).
  virtual double quantile(double u) const;
  /// x such that survival(x) = s, for s in (0, 1).
  virtual double survival_quantile(double s) const;

  /// Claimed Frechet domain-of-attraction index.
  virtual std::optional<double> tail_index() const { return std::nullopt; }
  virtual std::optional<double> closed_form_mean() const { return std::nullopt; }
};

/// A named catalog law with its parameters.
class Distribution : public Law {
 public:
  Distribution(std::string name, ParamList params) : name_(std::move(name)), params_(std::move(params)) {}

  const std::string& name() const { return name_; }
  const ParamList& params() const { return params_; }
  std::string label() const override;

  /// The catalog's closed-form normalizing constant a_n, when it has one.
  virtual std::optional<double> table_scaling(std::uint64_t n) const;
  /// The catalog's convergence rate c_n, when it has one.
  virtual std::optional<double> rate(std::uint64_t n) const;

 private:
  std::string name_;
  ParamList params_;
};

/// Frechet law Phi_alpha(x) = exp(-x^-alpha) on (0, inf).
class FrechetLaw final : public Distribution {
 public:
  explicit FrechetLaw(double alpha);

  double alpha() const { return alpha_; }
  double left_endpoint() const override { return 0.0; }
  double cdf(double x) const override;
  double pdf(double x) const override;
  double survival(double x) const override;
  double log_cdf(double x) const override;
  double log_pdf(double x) const override;
  double reverse_hazard(double x) const override;
  double quantile(double u) const override;
  double survival_quantile(double s) const override;
  std::optional<double> tail_index() const override { return alpha_; }
  std::optional<double> closed_form_mean() const override;
  std::optional<double> table_scaling(std::uint64_t n) const override;
  std::optional<double> rate(std::uint64_t) const override { return std::nullopt; }

 private:
  double alpha_;
};

/// Law of max(Y_1..Y_n) / a_n for i.i.d. Y_i ~ base (centering b_n = 0).
class MaximaLaw final : public Law {
 public:
  MaximaLaw(std::shared_ptr<const Law> base, std::uint64_t n, double a_n);

  const Law& base() const { return *base_; }
  std::shared_ptr<const Law> base_ptr() const { return base_; }
  std::uint64_t n() const { return n_; }
  double a_n() const { return a_; }

  std::string label() const override;
  double left_endpoint() const override;
  double starting_mass() const override;
  double cdf(double x) const override;
  double pdf(double x) const override;
  double survival(double x) const override;
  double log_cdf(double x) const override;
  double log_pdf(double x) const override;
  double reverse_hazard(double x) const override;
  double quantile(double u) const override;
  double survival_quantile(double s) const override;
  std::optional<double> tail_index() const override { return base_->tail_index(); }

 private:
  std::shared_ptr<const Law> base_;
  std::uint64_t n_;
  double a_;
  double log_n_;
  double log_a_;
};

enum class ScalingMode {
  table,    // catalog closed form where available, numeric inversion otherwise
  inverse,  // always F^<-(1 - 1/n) by bracketing + bisection
};

std::shared_ptr<const Distribution> catalog(std::string_view name, const ParamList& params = {});
std::vector<std::string> catalog_names();
/// One line per catalog entry describing its --param keys and defaults.
std::string catalog_help();

/// a_n = F^<-(1 - 1/n) or the catalog closed form (see ScalingMode).
double scaling_sequence(const Law& law, std::uint64_t n, ScalingMode mode = ScalingMode::table);

/// Numeric solution of survival(x) = s by bracketing and Brent refinement.
double invert_survival(const Law& law, double s);
/// Numeric solution of cdf(x) = u by bracketing and Brent refinement.
double invert_cdf(const Law& law, double u);

std::shared_ptr<const MaximaLaw> maxima(std::shared_ptr<const Law> base, std::uint64_t n,
                                        std::optional<double> a_n = std::nullopt,
                                        ScalingMode mode = ScalingMode::table);

bool has_finite_mean(const Law& law);
/// Mean of the law; closed form when known, quadrature of x dF otherwise.
double mean(const Law& law, const QuadratureConfig& cfg = {});

/// Probe points spread through the law's quantile range [1e-12, 1 - 1e-12]:
/// log-spaced in both tails and uniform in the bulk. Sorted, de-duplicated.
std::vector<double> probe_grid(const Law& law, int count);

}  // namespace fstein
