#include <algorithm>
#include <cmath>
#include <limits>

#include "fstein/error.hpp"
#include "fstein/special_functions.hpp"
#include "fstein/stein.hpp"

namespace fstein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNoise = 1e-13;

// q(x) - r_P(x) Q(x), which has the sign of 1 - r_P/r_Q and the magnitude
// of the Delta integrand.
double stein_residual(const Law& P, const Law& Q, double x) {
  const double lq = Q.log_pdf(x);
  const double q = lq == -kInf ? 0.0 : std::exp(lq);
  const double rp = P.reverse_hazard(x);
  double rq = 0.0;
  if (rp > 0.0) {
    const double lQ = Q.log_cdf(x);
    if (lQ > -kInf) rq = std::exp(std::log(rp) + lQ);
  }
  return q - rq;
}

// (q - r_P Q)/(q + r_P Q) from logarithms: same sign as the residual and
// still resolved where both terms underflow.
double relative_residual(const Law& P, const Law& Q, double x) {
  const double lq = Q.log_pdf(x);
  const double rp = P.reverse_hazard(x);
  const double lr = rp > 0.0 ? std::log(rp) + Q.log_cdf(x) : -kInf;
  if (lq == -kInf && lr == -kInf) return 0.0;
  if (lr == -kInf) return 1.0;
  if (lq == -kInf) return -1.0;
  return std::tanh(0.5 * (lq - lr));
}

// Sign changes of the residual on the probe grid. Probes where the residual
// is at rounding level (identical laws, underflowed tails) carry no sign.
std::vector<double> residual_kinks(const Law& P, const Law& Q, std::span<const double> probes) {
  auto raw = [&](double x) { return relative_residual(P, Q, x); };
  // The probe grid starts at a small quantile of Q; crossings further left
  // (Cauchy-type laws at large n) are found by stepping geometrically toward
  // the endpoint. The residual is compared in relative terms, so only the
  // points where both sides underflow are lost.
  std::vector<double> scan;
  if (!probes.empty()) {
    const double c = Q.left_endpoint();
    const double x0 = probes.front();
    const double w = std::max(1.0, std::abs(x0));
    for (int k = 60; k >= 1; --k) {
      const double x = std::isfinite(c) ? c + (x0 - c) * std::ldexp(1.0, -k) : x0 - w * (std::ldexp(1.0, k) - 1.0);
      if (x > c && x < x0) scan.push_back(x);
    }
  }
  scan.insert(scan.end(), probes.begin(), probes.end());
  std::vector<double> kinks;
  double last_x = 0.0;
  int last_sign = 0;
  for (double x : scan) {
    const double s = relative_residual(P, Q, x);
    if (!std::isfinite(s) || std::abs(s) <= kNoise) continue;
    const int sign = s > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) {
      try {
        kinks.push_back(brent_root(raw, last_x, x, 1e-13));
      } catch (const Error&) {
        // noise-level crossing that does not survive refinement
      }
    }
    last_sign = sign;
    last_x = x;
  }
  return kinks;
}

void check_roles(const Law& P, const Law& Q) {
  if (P.starting_mass() > 0.0) {
    throw Error(ErrorCode::precondition, "reference law P = " + P.label() + " has an atom (p_0 > 0)");
  }
  if (Q.left_endpoint() < P.left_endpoint()) {
    throw Error(ErrorCode::precondition,
                "c_Q < c_P: " + Q.label() + " starts left of the reference " + P.label());
  }
}

void check_weighted(const Law& P, const Law& Q, bool allow_negative_start = false) {
  if (P.left_endpoint() < 0.0 && !allow_negative_start) {
    throw Error(ErrorCode::precondition, "weighted discrepancy needs c_P >= 0, reference " + P.label() +
                                             " starts at a negative point");
  }
  if (Q.starting_mass() > 0.0) {
    throw Error(ErrorCode::precondition, "weighted discrepancy needs q_0 = 0, " + Q.label() + " has an atom");
  }
  if (allow_negative_start) return;  // research override: the integral may still converge
  if (!has_finite_mean(P)) {
    throw Error(ErrorCode::precondition, "weighted discrepancy needs a finite mean, " + P.label() + " has none");
  }
  if (!has_finite_mean(Q)) {
    throw Error(ErrorCode::precondition, "weighted discrepancy needs a finite mean, " + Q.label() + " has none");
  }
}

DiscrepancyResult integrate_discrepancy(const Law& P, const Law& Q, bool weighted, const QuadratureConfig& cfg) {
  cfg.validate();
  const double c = Q.left_endpoint();
  const auto probes = probe_grid(Q, cfg.probe_points);
  DiscrepancyResult out;
  out.kinks = residual_kinks(P, Q, probes);
  out.p_label = P.label();
  out.q_label = Q.label();
  out.weighted = weighted;

  std::vector<double> cuts(probes.begin(), probes.end());
  cuts.insert(cuts.end(), out.kinks.begin(), out.kinks.end());
  auto integrand = [&](double x) {
    const double s = std::abs(stein_residual(P, Q, x));
    return weighted ? x * s : s;
  };
  const QuadratureResult r = integrate(integrand, c, kInf, cfg, cuts);
  out.value = r.value;
  out.error_estimate = r.error_estimate;
  out.subdivisions = r.subdivisions_used;
  return out;
}

}  // namespace

DiscrepancyResult delta(const Law& P, const Law& Q, const QuadratureConfig& cfg) {
  check_roles(P, Q);
  return integrate_discrepancy(P, Q, false, cfg);
}

DiscrepancyResult delta_w(const Law& P, const Law& Q, const QuadratureConfig& cfg) {
  check_roles(P, Q);
  check_weighted(P, Q);
  return integrate_discrepancy(P, Q, true, cfg);
}

BoundReport bounds(const Law& P, const Law& Q, const QuadratureConfig& cfg) {
  const DiscrepancyResult d = delta(P, Q, cfg);
  BoundReport b;
  b.p_label = d.p_label;
  b.q_label = d.q_label;
  b.delta = d.value;
  b.delta_err = d.error_estimate;
  b.q0 = Q.starting_mass();
  b.kol_bound = b.delta + b.q0;
  b.tv_bound = 2.0 * b.delta + b.q0;
  b.kol_err = b.delta_err;
  b.tv_err = 2.0 * b.delta_err;
  try {
    check_weighted(P, Q);
  } catch (const Error& e) {
    b.notes.push_back(std::string("no Wasserstein bound: ") + e.what());
    return b;
  }
  const DiscrepancyResult w = integrate_discrepancy(P, Q, true, cfg);
  b.delta_w = w.value;
  b.delta_w_err = w.error_estimate;
  b.mu = mean(P, cfg);
  b.wass_bound = 2.0 * *b.mu * b.delta + 3.0 * w.value;
  b.wass_err = 2.0 * *b.mu * b.delta_err + 3.0 * w.error_estimate;
  return b;
}

FrechetPair frechet_pair(std::shared_ptr<const Law> F, std::uint64_t n, const FrechetOptions& opts) {
  if (!F) throw Error(ErrorCode::invalid_parameter, "frechet_pair: null law");
  const std::optional<double> alpha = opts.alpha ? opts.alpha : F->tail_index();
  if (!alpha) throw Error(ErrorCode::invalid_parameter, F->label() + " has no tail index; pass alpha");
  FrechetPair pair;
  pair.frechet = std::make_shared<FrechetLaw>(*alpha);
  pair.maxima = maxima(F, n, opts.a_n, opts.scaling);
  const bool automatic_reference = F->left_endpoint() <= 0.0;
  switch (opts.roles) {
    case RoleMode::automatic: pair.maxima_is_reference = automatic_reference; break;
    case RoleMode::maxima_reference: pair.maxima_is_reference = true; break;
    case RoleMode::frechet_reference: pair.maxima_is_reference = false; break;
  }
  if (pair.maxima_is_reference) {
    pair.P = pair.maxima;
    pair.Q = pair.frechet;
  } else {
    pair.P = pair.frechet;
    pair.Q = pair.maxima;
  }
  if (pair.maxima_is_reference != automatic_reference) {
    pair.warnings.push_back("role override: the automatic choice would take " +
                            std::string(automatic_reference ? "F_n" : "Phi_alpha") + " as the reference");
  }
  return pair;
}

DiscrepancyResult frechet_delta(std::shared_ptr<const Law> F, std::uint64_t n, bool weighted,
                                const FrechetOptions& opts, const QuadratureConfig& cfg) {
  FrechetPair pair = frechet_pair(std::move(F), n, opts);
  const Law& P = *pair.P;
  const Law& Q = *pair.Q;
  std::vector<std::string> warnings = pair.warnings;

  const bool roles_ok = P.starting_mass() == 0.0 && Q.left_endpoint() >= P.left_endpoint();
  if (opts.roles == RoleMode::automatic || roles_ok) {
    check_roles(P, Q);
  } else {
    warnings.push_back("role hypotheses violated (p_0 > 0 or c_Q < c_P); the value bounds no distance");
  }
  if (weighted) {
    const bool unsafe = P.left_endpoint() < 0.0 && opts.unsafe_weighted;
    if (unsafe) {
      warnings.push_back("c_P < 0: weighted value computed on request, no Wasserstein bound is claimed");
    }
    check_weighted(P, Q, unsafe);
  }
  DiscrepancyResult r = integrate_discrepancy(P, Q, weighted, cfg);
  r.warnings = std::move(warnings);
  return r;
}

BoundReport frechet_bounds(std::shared_ptr<const Law> F, std::uint64_t n, const FrechetOptions& opts,
                           const QuadratureConfig& cfg) {
  FrechetPair pair = frechet_pair(std::move(F), n, opts);
  BoundReport b = bounds(*pair.P, *pair.Q, cfg);
  b.notes.insert(b.notes.begin(), pair.warnings.begin(), pair.warnings.end());
  return b;
}

double frechet_vs_frechet(double alpha, double beta, bool weighted) {
  if (!(alpha > 0.0) || !(beta > alpha)) {
    throw Error(ErrorCode::precondition, "frechet_vs_frechet: the closed form needs beta > alpha > 0");
  }
  using special::gamma;
  using special::upper_incomplete_gamma;
  const double y0 = std::pow(alpha / beta, alpha / (beta - alpha));
  if (!weighted) {
    return 1.0 - 2.0 * std::exp(-y0) - gamma((alpha + beta) / alpha) +
           2.0 * beta / alpha * upper_incomplete_gamma(beta / alpha, y0);
  }
  if (!(alpha > 1.0)) {
    throw Error(ErrorCode::nonexistent_mean, "frechet_vs_frechet: the weighted form needs alpha > 1");
  }
  return -(gamma(-1.0 / alpha) + beta * gamma((beta - 1.0) / alpha) +
           2.0 * alpha * upper_incomplete_gamma((alpha - 1.0) / alpha, y0) -
           2.0 * beta * upper_incomplete_gamma((beta - 1.0) / alpha, y0)) /
         alpha;
}

double pareto_delta(std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "pareto_delta: n must be at least 1");
  return 1.0 / (static_cast<double>(n) + 1.0);
}

double pareto_delta_w(double alpha, std::uint64_t n) {
  if (n < 1) throw Error(ErrorCode::invalid_parameter, "pareto_delta_w: n must be at least 1");
  if (!(alpha > 1.0)) {
    throw Error(ErrorCode::nonexistent_mean, "pareto_delta_w: needs alpha > 1 (mean of Phi_alpha)");
  }
  const double nn = static_cast<double>(n);
  const double ia = 1.0 / alpha;
  return std::exp(-std::log(nn) * ia + special::ln_gamma_ratio(nn + 1.0, 2.0 + nn - ia) +
                  special::ln_gamma(2.0 - ia));
}

double u_n_diagnostic(const Law& F, std::uint64_t n, ScalingMode mode) {
  const auto alpha = F.tail_index();
  if (!alpha) throw Error(ErrorCode::invalid_parameter, F.label() + " has no tail index");
  const double a = scaling_sequence(F, n, mode);
  return static_cast<double>(n) * a * F.reverse_hazard(a) / *alpha;
}

}  // namespace fstein
