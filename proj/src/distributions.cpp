#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fstein/error.hpp"
#include "fstein/law.hpp"
#include "fstein/quadrature.hpp"
#include "fstein/special_functions.hpp"

namespace fstein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// log(1 + e^z) without overflow.
double log1pexp(double z) { return z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

// Reads typed parameters and rejects unknown keys.
class ParamReader {
 public:
  ParamReader(std::string_view dist, const ParamList& given) : dist_(dist), given_(given) {}

  double number(const std::string& key, double fallback) {
    used_.push_back(key);
    auto it = given_.find(key);
    if (it == given_.end()) {
      resolved_[key] = format_number(fallback);
      return fallback;
    }
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
      resolved_[key] = format_number(v);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_parameter,
                  std::string(dist_) + ": parameter '" + key + "' is not a number: " + it->second);
    }
  }

  std::string text(const std::string& key, const std::string& fallback) {
    used_.push_back(key);
    auto it = given_.find(key);
    const std::string v = it == given_.end() ? fallback : it->second;
    resolved_[key] = v;
    return v;
  }

  ParamList finish() const {
    for (const auto& [k, v] : given_) {
      if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
        throw Error(ErrorCode::invalid_parameter, std::string(dist_) + ": unknown parameter '" + k + "'");
      }
    }
    return resolved_;
  }

  [[noreturn]] void reject(const std::string& why) const {
    throw Error(ErrorCode::invalid_parameter, std::string(dist_) + ": " + why);
  }

 private:
  std::string_view dist_;
  const ParamList& given_;
  std::vector<std::string> used_;
  ParamList resolved_;
};

// Finds the root of an increasing function g on [c, inf) (or the real line
// when c = -inf). Refinement happens in log x whenever the bracket is
// positive, which keeps heavy tails well conditioned.
double solve_increasing(const RealFunction& g, double c) {
  constexpr int kMaxExpand = 2100;
  double lo, hi;
  if (std::isfinite(c)) {
    lo = c;
    if (g(lo) >= 0.0) return c;
    const double step = std::max(1.0, std::abs(c));
    hi = c + step;
    double width = step;
    int k = 0;
    while (!(g(hi) >= 0.0)) {
      if (++k > kMaxExpand || !std::isfinite(hi)) throw Error(ErrorCode::inversion, "bracketing failed (upper)");
      lo = hi;
      width *= 2.0;
      hi = c + width;
    }
  } else {
    hi = 1.0;
    int k = 0;
    while (!(g(hi) >= 0.0)) {
      if (++k > kMaxExpand || !std::isfinite(hi)) throw Error(ErrorCode::inversion, "bracketing failed (upper)");
      hi *= 2.0;
    }
    lo = std::min(-1.0, hi - 1.0);
    k = 0;
    while (!(g(lo) < 0.0)) {
      if (++k > kMaxExpand || !std::isfinite(lo)) throw Error(ErrorCode::inversion, "bracketing failed (lower)");
      hi = lo;
      lo *= 2.0;
    }
  }
  if (lo <= 0.0 && hi > 0.0) {
    // try to move the lower end to a positive point so log-space applies
    double probe = hi;
    for (int k = 0; k < 1100 && probe > 0.0; ++k) {
      probe *= 0.5;
      if (probe <= lo) break;
      if (g(probe) < 0.0) {
        lo = probe;
        break;
      }
      hi = probe;
    }
  }
  if (lo > 0.0) {
    auto gl = [&g](double y) { return g(std::exp(y)); };
    return std::exp(brent_root(gl, std::log(lo), std::log(hi), 1e-16));
  }
  return brent_root(g, lo, hi, 1e-15);
}

// --------------------------------------------------------------------------
// Catalog entries

class Pareto final : public Distribution {
 public:
  Pareto(double alpha, ParamList p) : Distribution("pareto", std::move(p)), alpha_(alpha) {}
  double left_endpoint() const override { return 1.0; }
  double cdf(double x) const override { return x < 1.0 ? 0.0 : -std::expm1(-alpha_ * std::log(x)); }
  double survival(double x) const override { return x < 1.0 ? 1.0 : std::exp(-alpha_ * std::log(x)); }
  double pdf(double x) const override { return x < 1.0 ? 0.0 : std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return x < 1.0 ? -kInf : std::log(alpha_) - (alpha_ + 1.0) * std::log(x);
  }
  double quantile(double u) const override { return u <= 0.0 ? 1.0 : std::exp(-std::log1p(-u) / alpha_); }
  double survival_quantile(double s) const override { return std::exp(-std::log(s) / alpha_); }
  std::optional<double> tail_index() const override { return alpha_; }
  std::optional<double> closed_form_mean() const override {
    if (alpha_ <= 1.0) return std::nullopt;
    return alpha_ / (alpha_ - 1.0);
  }
  std::optional<double> table_scaling(std::uint64_t n) const override {
    return std::pow(static_cast<double>(n), 1.0 / alpha_);
  }

 private:
  double alpha_;
};

class Cauchy final : public Distribution {
 public:
  explicit Cauchy(ParamList p) : Distribution("cauchy", std::move(p)) {}
  double left_endpoint() const override { return -kInf; }
  double cdf(double x) const override {
    if (x < 0.0) return std::atan(-1.0 / x) / kPi;
    if (x == 0.0) return 0.5;
    return 1.0 - std::atan(1.0 / x) / kPi;
  }
  double survival(double x) const override { return x > 0.0 ? std::atan(1.0 / x) / kPi : 1.0 - cdf(x); }
  double pdf(double x) const override {
    if (std::abs(x) > 1e150) return 1.0 / (kPi * x * x);
    return 1.0 / (kPi * (1.0 + x * x));
  }
  double quantile(double u) const override {
    if (u <= 0.0) return -kInf;
    if (u < 0.5) return -1.0 / std::tan(kPi * u);
    if (u == 0.5) return 0.0;
    return 1.0 / std::tan(kPi * (1.0 - u));
  }
  double survival_quantile(double s) const override {
    if (s < 0.5) return 1.0 / std::tan(kPi * s);
    return quantile(1.0 - s);
  }
  std::optional<double> tail_index() const override { return 1.0; }
  std::optional<double> table_scaling(std::uint64_t n) const override { return static_cast<double>(n) / kPi; }
};

class LogLogistic final : public Distribution {
 public:
  LogLogistic(double alpha, ParamList p) : Distribution("loglogistic", std::move(p)), alpha_(alpha) {}
  double left_endpoint() const override { return 0.0; }
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : std::exp(log_cdf(x)); }
  double log_cdf(double x) const override {
    return x <= 0.0 ? -kInf : -log1pexp(-alpha_ * std::log(x));
  }
  double survival(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-log1pexp(alpha_ * std::log(x))); }
  double pdf(double x) const override { return x <= 0.0 ? 0.0 : std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    if (x <= 0.0) return -kInf;
    const double lx = std::log(x);
    return std::log(alpha_) + (alpha_ - 1.0) * lx - 2.0 * log1pexp(alpha_ * lx);
  }
  double quantile(double u) const override {
    return u <= 0.0 ? 0.0 : std::exp((std::log(u) - std::log1p(-u)) / alpha_);
  }
  double survival_quantile(double s) const override { return std::exp((std::log1p(-s) - std::log(s)) / alpha_); }
  std::optional<double> tail_index() const override { return alpha_; }
  std::optional<double> closed_form_mean() const override {
    if (alpha_ <= 1.0) return std::nullopt;
    return (kPi / alpha_) / std::sin(kPi / alpha_);
  }
  std::optional<double> table_scaling(std::uint64_t n) const override {
    return std::pow(static_cast<double>(n), 1.0 / alpha_);
  }

 private:
  double alpha_;
};

class GeneralizedPareto final : public Distribution {
 public:
  GeneralizedPareto(double xi, double sigma, ParamList p)
      : Distribution("gpd", std::move(p)), xi_(xi), sigma_(sigma) {}
  double left_endpoint() const override { return 0.0; }
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-y(x) / xi_); }
  double survival(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-y(x) / xi_); }
  double pdf(double x) const override { return x < 0.0 ? 0.0 : std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    return x < 0.0 ? -kInf : -(1.0 / xi_ + 1.0) * y(x) - std::log(sigma_);
  }
  double quantile(double u) const override {
    return u <= 0.0 ? 0.0 : sigma_ * std::expm1(-xi_ * std::log1p(-u)) / xi_;
  }
  double survival_quantile(double s) const override { return sigma_ * std::expm1(-xi_ * std::log(s)) / xi_; }
  std::optional<double> tail_index() const override { return 1.0 / xi_; }
  std::optional<double> closed_form_mean() const override { return sigma_ / (1.0 - xi_); }
  std::optional<double> table_scaling(std::uint64_t n) const override {
    return sigma_ / xi_ * std::pow(static_cast<double>(n), xi_);
  }

 private:
  double y(double x) const { return std::log1p(xi_ * x / sigma_); }
  double xi_;
  double sigma_;
};

class BurrXII final : public Distribution {
 public:
  BurrXII(double alpha, double tau, ParamList p) : Distribution("burr12", std::move(p)), alpha_(alpha), tau_(tau) {}
  double left_endpoint() const override { return 0.0; }
  double cdf(double x) const override { return x <= 0.0 ? 0.0 : -std::expm1(-tau_ * l(x)); }
  double survival(double x) const override { return x <= 0.0 ? 1.0 : std::exp(-tau_ * l(x)); }
  double pdf(double x) const override { return x <= 0.0 ? 0.0 : std::exp(log_pdf(x)); }
  double log_pdf(double x) const override {
    if (x <= 0.0) return -kInf;
    return std::log(alpha_ * tau_) + (alpha_ - 1.0) * std::log(x) - (tau_ + 1.0) * l(x);
  }
  double quantile(double u) const override {
    return u <= 0.0 ? 0.0 : std::pow(std::expm1(-std::log1p(-u) / tau_), 1.0 / alpha_);
  }
  double survival_quantile(double s) const override {
    return std::pow(std::expm1(-std::log(s) / tau_), 1.0 / alpha_);
  }
  std::optional<double> tail_index() const override { return alpha_ * tau_; }
  std::optional<double> closed_form_mean() const override {
    if (alpha_ * tau_ <= 1.0) return std::nullopt;
    return std::exp(std::log(tau_) + special::ln_gamma(tau_ - 1.0 / alpha_) +
                    special::ln_gamma(1.0 + 1.0 / alpha_) - special::ln_gamma(tau_ + 1.0));
  }
  std::optional<double> table_scaling(std::uint64_t n) const override {
    return std::pow(static_cast<double>(n), 1.0 / (alpha_ * tau_));
  }

 private:
  double l(double x) const { return log1pexp(alpha_ * std::log(x)); }  // log(1 + x^alpha)
  double alpha_;
  double tau_;
};

// 1 - x^-alpha - x^-(alpha+beta), started at the root x0 of
// x^-alpha + x^-(alpha+beta) = 1 so that F(x0) = 0.
class TwoTermPareto final : public Distribution {
 public:
  TwoTermPareto(double alpha, double beta, double x0, ParamList p)
      : Distribution("two_term_pareto", std::move(p)), alpha_(alpha), beta_(beta), x0_(x0) {}
  double left_endpoint() const override { return x0_; }
  double survival(double x) const override {
    if (x < x0_) return 1.0;
    return std::exp(-alpha_ * std::log(x)) + std::exp(-(alpha_ + beta_) * std::log(x));
  }
  double cdf(double x) const override {
    if (x <= x0_) return 0.0;
    const double s = survival(x);
    if (s < 0.5) return 1.0 - s;
    // S(x0) - S(x) without cancellation near x0
    const double r = std::log(x / x0_);
    return std::pow(x0_, -alpha_) * -std::expm1(-alpha_ * r) +
           std::pow(x0_, -alpha_ - beta_) * -std::expm1(-(alpha_ + beta_) * r);
  }
  double pdf(double x) const override {
    if (x < x0_) return 0.0;
    const double lx = std::log(x);
    return alpha_ * std::exp(-(alpha_ + 1.0) * lx) + (alpha_ + beta_) * std::exp(-(alpha_ + beta_ + 1.0) * lx);
  }
  std::optional<double> tail_index() const override { return alpha_; }
  std::optional<double> closed_form_mean() const override {
    if (alpha_ <= 1.0) return std::nullopt;
    return x0_ + std::pow(x0_, 1.0 - alpha_) / (alpha_ - 1.0) +
           std::pow(x0_, 1.0 - alpha_ - beta_) / (alpha_ + beta_ - 1.0);
  }
  // The tabulated (n/2)^(1/alpha) does not satisfy n(1 - F(a_n)) -> 1 for
  // this survival function, so a_n always comes from inversion.
  std::optional<double> table_scaling(std::uint64_t) const override { return std::nullopt; }

 private:
  double alpha_;
  double beta_;
  double x0_;
};

// 1 - x^-alpha / log(log x) on [e^e, inf); carries an atom 1 - e^(-alpha e) at e^e.
class LogLogCorrected final : public Distribution {
 public:
  LogLogCorrected(double alpha, ParamList p)
      : Distribution("loglog_corrected", std::move(p)),
        alpha_(alpha),
        c_(std::exp(std::numbers::e)),
        f0_(-std::expm1(-alpha * std::numbers::e)) {}
  double left_endpoint() const override { return c_; }
  double starting_mass() const override { return f0_; }
  double survival(double x) const override {
    if (x < c_) return 1.0;
    const double l1 = std::log(x);
    return std::exp(-alpha_ * l1) / std::log(l1);
  }
  double cdf(double x) const override { return x < c_ ? 0.0 : 1.0 - survival(x); }
  double pdf(double x) const override {
    if (x < c_) return 0.0;
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return std::exp(-(alpha_ + 1.0) * l1) * (alpha_ / l2 + 1.0 / (l1 * l2 * l2));
  }
  double quantile(double u) const override { return u <= f0_ ? c_ : Distribution::quantile(u); }
  std::optional<double> tail_index() const override { return alpha_; }
  std::optional<double> table_scaling(std::uint64_t n) const override {
    if (n < 3) return std::nullopt;
    const double nn = static_cast<double>(n);
    return std::pow(nn / std::log(std::log(nn)), 1.0 / alpha_);
  }
  std::optional<double> rate(std::uint64_t n) const override {
    if (n < 3) return std::nullopt;
    return std::log(std::log(static_cast<double>(n)));
  }

 private:
  double alpha_;
  double c_;
  double f0_;
};

// 1 - x^-alpha / (1 + log x) on [1, inf).
class LogCorrected final : public Distribution {
 public:
  LogCorrected(double alpha, ParamList p) : Distribution("log_corrected", std::move(p)), alpha_(alpha) {}
  double left_endpoint() const override { return 1.0; }
  double survival(double x) const override {
    if (x < 1.0) return 1.0;
    const double l = std::log(x);
    return std::exp(-alpha_ * l) / (1.0 + l);
  }
  double cdf(double x) const override {
    if (x <= 1.0) return 0.0;
    const double l = std::log(x);
    return (l - std::expm1(-alpha_ * l)) / (1.0 + l);
  }
  double pdf(double x) const override {
    if (x < 1.0) return 0.0;
    const double l = std::log(x);
    return std::exp(-(alpha_ + 1.0) * l) * (alpha_ * (1.0 + l) + 1.0) / ((1.0 + l) * (1.0 + l));
  }
  std::optional<double> tail_index() const override { return alpha_; }
  std::optional<double> table_scaling(std::uint64_t n) const override {
    if (n < 2) return std::nullopt;
    const double nn = static_cast<double>(n);
    return std::pow(nn / std::log(nn), 1.0 / alpha_);
  }
  std::optional<double> rate(std::uint64_t n) const override {
    if (n < 3) return std::nullopt;
    const double ln = std::log(static_cast<double>(n));
    return ln / std::log(ln);
  }

 private:
  double alpha_;
};

std::shared_ptr<const Distribution> make_two_term(ParamReader& r) {
  const double alpha = r.number("alpha", 2.0);
  const double beta = r.number("beta", 3.0);
  const std::string endpoint = r.text("endpoint", "table");
  ParamList resolved = r.finish();
  if (!(alpha > 0.0) || !(beta > alpha)) r.reject("need beta > alpha > 0");
  if (endpoint == "table") {
    // F(1) = 1 - 1 - 1 = -1 for every alpha, beta
    r.reject("F(c_F) = -1 < 0 with the tabulated left endpoint 1; use endpoint=root");
  }
  if (endpoint != "root") r.reject("endpoint must be 'table' or 'root'");
  auto excess = [alpha, beta](double x) {
    const double lx = std::log(x);
    return 1.0 - std::exp(-alpha * lx) - std::exp(-(alpha + beta) * lx);
  };
  double hi = 2.0;
  while (excess(hi) <= 0.0) hi *= 2.0;
  const double x0 = brent_root(excess, 1.0, hi, 1e-16);
  return std::make_shared<TwoTermPareto>(alpha, beta, x0, std::move(resolved));
}

}  // namespace

// --------------------------------------------------------------------------
// Law defaults

double Law::log_cdf(double x) const {
  if (x < left_endpoint()) return -kInf;
  const double s = survival(x);
  if (s < 0.5) return std::log1p(-s);
  const double c = cdf(x);
  return c > 0.0 ? std::log(c) : -kInf;
}

double Law::log_pdf(double x) const {
  const double p = pdf(x);
  return p > 0.0 ? std::log(p) : -kInf;
}

double Law::reverse_hazard(double x) const {
  if (!(x > left_endpoint())) return 0.0;
  const double lp = log_pdf(x);
  if (lp == -kInf) return 0.0;
  const double lc = log_cdf(x);
  if (lc == -kInf) {
    throw Error(ErrorCode::evaluation,
                label() + ": cdf vanishes where the density is positive at x = " + std::to_string(x));
  }
  return std::exp(lp - lc);
}

double Law::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorCode::domain, "quantile: level outside [0, 1]");
  if (u == 0.0) return left_endpoint();
  if (u == 1.0) return kInf;
  if (u <= 0.5) return invert_cdf(*this, u);
  return survival_quantile(1.0 - u);
}

double Law::survival_quantile(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::domain, "survival_quantile: level outside [0, 1]");
  if (s == 0.0) return kInf;
  if (s >= 0.5) return quantile(1.0 - s);
  return invert_survival(*this, s);
}

double invert_cdf(const Law& law, double u) {
  const double lu = std::log(u);
  return solve_increasing([&](double x) { return law.log_cdf(x) - lu; }, law.left_endpoint());
}

double invert_survival(const Law& law, double s) {
  const double ls = std::log(s);
  return solve_increasing(
      [&](double x) {
        const double sv = law.survival(x);
        return sv > 0.0 ? ls - std::log(sv) : kInf;
      },
      law.left_endpoint());
}

// --------------------------------------------------------------------------
// Distribution / Frechet

std::string Distribution::label() const {
  std::string out = name_ + "(";
  bool first = true;
  for (const auto& [k, v] : params_) {
    if (!first) out += ",";
    out += k + "=" + v;
    first = false;
  }
  return out + ")";
}

std::optional<double> Distribution::table_scaling(std::uint64_t) const { return std::nullopt; }

std::optional<double> Distribution::rate(std::uint64_t n) const { return static_cast<double>(n); }

FrechetLaw::FrechetLaw(double alpha)
    : Distribution("frechet", ParamList{{"alpha", format_number(alpha)}}), alpha_(alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorCode::invalid_parameter, "frechet: alpha must be positive");
  }
}

double FrechetLaw::cdf(double x) const { return x <= 0.0 ? 0.0 : std::exp(log_cdf(x)); }

double FrechetLaw::survival(double x) const { return x <= 0.0 ? 1.0 : -std::expm1(log_cdf(x)); }

double FrechetLaw::log_cdf(double x) const { return x <= 0.0 ? -kInf : -std::exp(-alpha_ * std::log(x)); }

double FrechetLaw::pdf(double x) const {
  const double lp = log_pdf(x);
  // exp(-x^-alpha) below e^-700 is treated as exactly zero
  return lp < -700.0 ? 0.0 : std::exp(lp);
}

double FrechetLaw::log_pdf(double x) const {
  if (x <= 0.0) return -kInf;
  const double lx = std::log(x);
  return std::log(alpha_) - (alpha_ + 1.0) * lx - std::exp(-alpha_ * lx);
}

double FrechetLaw::reverse_hazard(double x) const {
  return x <= 0.0 ? 0.0 : alpha_ * std::exp(-(alpha_ + 1.0) * std::log(x));
}

double FrechetLaw::quantile(double u) const {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return kInf;
  return std::exp(-std::log(-std::log(u)) / alpha_);
}

double FrechetLaw::survival_quantile(double s) const {
  if (s <= 0.0) return kInf;
  if (s >= 1.0) return 0.0;
  return std::exp(-std::log(-std::log1p(-s)) / alpha_);
}

std::optional<double> FrechetLaw::closed_form_mean() const {
  if (alpha_ <= 1.0) return std::nullopt;
  return special::gamma(1.0 - 1.0 / alpha_);
}

std::optional<double> FrechetLaw::table_scaling(std::uint64_t n) const {
  return std::pow(static_cast<double>(n), 1.0 / alpha_);
}

// --------------------------------------------------------------------------
// Maxima

MaximaLaw::MaximaLaw(std::shared_ptr<const Law> base, std::uint64_t n, double a_n)
    : base_(std::move(base)), n_(n), a_(a_n) {
  if (!base_) throw Error(ErrorCode::invalid_parameter, "maxima: null base law");
  if (n_ < 1) throw Error(ErrorCode::invalid_parameter, "maxima: n must be at least 1");
  if (!(a_ > 0.0) || !std::isfinite(a_)) throw Error(ErrorCode::invalid_parameter, "maxima: a_n must be positive");
  log_n_ = std::log(static_cast<double>(n_));
  log_a_ = std::log(a_);
}

std::string MaximaLaw::label() const {
  return "max[" + base_->label() + ";n=" + std::to_string(n_) + ",a_n=" + format_number(a_) + "]";
}

double MaximaLaw::left_endpoint() const { return base_->left_endpoint() / a_; }

double MaximaLaw::starting_mass() const {
  const double f0 = base_->starting_mass();
  return f0 > 0.0 ? std::exp(static_cast<double>(n_) * std::log(f0)) : 0.0;
}

double MaximaLaw::log_cdf(double x) const {
  if (x < left_endpoint()) return -kInf;
  return static_cast<double>(n_) * base_->log_cdf(a_ * x);
}

double MaximaLaw::cdf(double x) const { return std::exp(log_cdf(x)); }

double MaximaLaw::survival(double x) const { return -std::expm1(log_cdf(x)); }

double MaximaLaw::log_pdf(double x) const {
  if (x < left_endpoint()) return -kInf;
  const double y = a_ * x;
  const double lf = base_->log_pdf(y);
  if (lf == -kInf) return -kInf;
  const double lF = base_->log_cdf(y);
  if (lF == -kInf) return n_ == 1 ? log_n_ + log_a_ + lf : -kInf;
  return log_n_ + log_a_ + lf + static_cast<double>(n_ - 1) * lF;
}

double MaximaLaw::pdf(double x) const {
  const double lp = log_pdf(x);
  return lp == -kInf ? 0.0 : std::exp(lp);
}

double MaximaLaw::reverse_hazard(double x) const {
  if (!(x > left_endpoint())) return 0.0;
  return static_cast<double>(n_) * a_ * base_->reverse_hazard(a_ * x);
}

double MaximaLaw::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw Error(ErrorCode::domain, "quantile: level outside [0, 1]");
  if (u <= starting_mass() || u == 0.0) return left_endpoint();
  if (u == 1.0) return kInf;
  const double lu = std::log(u) / static_cast<double>(n_);
  const double v = std::exp(lu);
  return (v <= 0.5 ? base_->quantile(v) : base_->survival_quantile(-std::expm1(lu))) / a_;
}

double MaximaLaw::survival_quantile(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw Error(ErrorCode::domain, "survival_quantile: level outside [0, 1]");
  if (s == 0.0) return kInf;
  if (1.0 - s <= starting_mass()) return left_endpoint();
  const double lu = std::log1p(-s) / static_cast<double>(n_);
  const double v = std::exp(lu);
  return (v <= 0.5 ? base_->quantile(v) : base_->survival_quantile(-std::expm1(lu))) / a_;
}

// --------------------------------------------------------------------------
// Free functions

std::shared_ptr<const Distribution> catalog(std::string_view name, const ParamList& params) {
  ParamReader r(name, params);
  if (name == "pareto") {
    const double a = r.number("alpha", 2.0);
    if (!(a > 0.0)) r.reject("alpha must be positive");
    return std::make_shared<Pareto>(a, r.finish());
  }
  if (name == "cauchy") {
    return std::make_shared<Cauchy>(r.finish());
  }
  if (name == "loglogistic") {
    const double a = r.number("alpha", 2.0);
    if (!(a > 0.0)) r.reject("alpha must be positive");
    return std::make_shared<LogLogistic>(a, r.finish());
  }
  if (name == "gpd") {
    const double xi = r.number("xi", 0.5);
    const double sigma = r.number("sigma", xi);
    if (!(xi > 0.0 && xi < 1.0)) r.reject("need 0 < xi < 1");
    if (!(sigma > 0.0)) r.reject("sigma must be positive");
    return std::make_shared<GeneralizedPareto>(xi, sigma, r.finish());
  }
  if (name == "burr12") {
    const double a = r.number("alpha", 2.0);
    const double tau = r.number("tau", 3.0);
    if (!(a > 0.0)) r.reject("alpha must be positive");
    if (!(tau > 1.0)) r.reject("need tau > 1");
    return std::make_shared<BurrXII>(a, tau, r.finish());
  }
  if (name == "two_term_pareto") {
    return make_two_term(r);
  }
  if (name == "loglog_corrected") {
    const double a = r.number("alpha", 2.0);
    if (!(a > 0.0)) r.reject("alpha must be positive");
    return std::make_shared<LogLogCorrected>(a, r.finish());
  }
  if (name == "log_corrected") {
    const double a = r.number("alpha", 2.0);
    if (!(a > 0.0)) r.reject("alpha must be positive");
    return std::make_shared<LogCorrected>(a, r.finish());
  }
  if (name == "frechet") {
    const double a = r.number("alpha", 2.0);
    r.finish();
    return std::make_shared<FrechetLaw>(a);
  }
  throw Error(ErrorCode::unknown_distribution, "unknown distribution '" + std::string(name) + "'");
}

std::vector<std::string> catalog_names() {
  return {"pareto", "cauchy", "loglogistic", "gpd", "burr12",
          "two_term_pareto", "loglog_corrected", "log_corrected", "frechet"};
}

std::string catalog_help() {
  return "pareto            1 - x^-alpha on [1,inf)                 alpha=2\n"
         "cauchy            1/2 + atan(x)/pi on R                   (no parameters)\n"
         "loglogistic       x^alpha/(1+x^alpha) on (0,inf)          alpha=2\n"
         "gpd               1 - (1+xi x/sigma)^(-1/xi) on [0,inf)   xi=0.5 (0<xi<1), sigma=xi\n"
         "burr12            1 - (1+x^alpha)^-tau on [0,inf)         alpha=2, tau=3 (tau>1)\n"
         "two_term_pareto   1 - x^-alpha - x^-(alpha+beta)          alpha=2, beta=3 (beta>alpha), endpoint=table|root\n"
         "loglog_corrected  1 - x^-alpha/log(log x) on [e^e,inf)    alpha=2\n"
         "log_corrected     1 - x^-alpha/(1+log x) on [1,inf)       alpha=2\n"
         "frechet           exp(-x^-alpha) on (0,inf)               alpha=2\n";
}

double scaling_sequence(const Law& law, std::uint64_t n, ScalingMode mode) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "scaling_sequence: n must be at least 1");
  if (mode == ScalingMode::table) {
    if (const auto* d = dynamic_cast<const Distribution*>(&law)) {
      if (auto a = d->table_scaling(n)) return *a;
    }
  }
  const double s = 1.0 / static_cast<double>(n);
  const double a = s >= 1.0 ? law.left_endpoint() : invert_survival(law, s);
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::inversion, "scaling_sequence: F^<-(1 - 1/n) is not a positive number for n = " +
                                          std::to_string(n));
  }
  return a;
}

std::shared_ptr<const MaximaLaw> maxima(std::shared_ptr<const Law> base, std::uint64_t n,
                                        std::optional<double> a_n, ScalingMode mode) {
  if (!base) throw Error(ErrorCode::invalid_parameter, "maxima: null base law");
  const double a = a_n ? *a_n : scaling_sequence(*base, n, mode);
  return std::make_shared<MaximaLaw>(std::move(base), n, a);
}

bool has_finite_mean(const Law& law) {
  const auto idx = law.tail_index();
  return !idx || *idx > 1.0;
}

double mean(const Law& law, const QuadratureConfig& cfg) {
  if (!has_finite_mean(law)) {
    throw Error(ErrorCode::nonexistent_mean, law.label() + " has no finite mean (tail index <= 1)");
  }
  if (auto m = law.closed_form_mean()) return *m;
  const double c = law.left_endpoint();
  const auto grid = probe_grid(law, 64);
  auto integrand = [&law](double x) { return x * law.pdf(x); };
  const double body = integrate(integrand, c, kInf, cfg, grid).value;
  const double q0 = law.starting_mass();
  return q0 > 0.0 ? body + c * q0 : body;
}

std::vector<double> probe_grid(const Law& law, int count) {
  const int tail = std::max(2, count / 4);
  const int mid = std::max(2, count - 2 * tail);
  std::vector<double> xs;
  xs.reserve(2 * tail + mid);
  for (double u : log_spaced(1e-12, 0.05, tail)) xs.push_back(law.quantile(u));
  for (double u : lin_spaced(0.05, 0.95, mid)) xs.push_back(law.quantile(u));
  for (double s : log_spaced(1e-12, 0.05, tail)) xs.push_back(law.survival_quantile(s));
  const double c = law.left_endpoint();
  std::erase_if(xs, [c](double x) { return !std::isfinite(x) || !(x > c); });
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace fstein
