#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fstein/distance.hpp"
#include "fstein/error.hpp"

namespace fstein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNoise = 1e-13;
constexpr int kKolGrid = 5000;
constexpr int kKolRefine = 10;

// F_P(x) - F_Q(x), taken from the survival functions once both cdfs are
// past 1/2 so the right tail keeps its relative accuracy.
double cdf_gap(const Law& P, const Law& Q, double x, double* scale = nullptr) {
  const double fp = P.cdf(x);
  const double fq = Q.cdf(x);
  if (fp > 0.5 && fq > 0.5) {
    const double sp = P.survival(x);
    const double sq = Q.survival(x);
    if (scale) *scale = sp + sq;
    return sq - sp;
  }
  if (scale) *scale = fp + fq;
  return fp - fq;
}

// Left limit of the cdf at x: the atom at c is excluded.
double cdf_left(const Law& L, double x) {
  if (x <= L.left_endpoint()) return 0.0;
  return L.cdf(x);
}

std::vector<double> merged_probes(const Law& P, const Law& Q, int count) {
  std::vector<double> xs = probe_grid(P, count);
  const auto q = probe_grid(Q, count);
  xs.insert(xs.end(), q.begin(), q.end());
  for (double c : {P.left_endpoint(), Q.left_endpoint()}) {
    if (std::isfinite(c)) xs.push_back(c);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// int_lo^inf |s| with cuts at the probes and at the sign changes of s.
// Probes where s is at rounding level relative to `scale` carry no sign.
QuadratureResult abs_integral(const std::function<double(double, double*)>& s, double lo,
                              const std::vector<double>& probes, const QuadratureConfig& cfg) {
  auto raw = [&](double x) { return s(x, nullptr); };
  std::vector<double> cuts;
  double last_x = 0.0;
  int last_sign = 0;
  for (double x : probes) {
    if (x <= lo) continue;
    cuts.push_back(x);
    double scale = 0.0;
    const double v = s(x, &scale);
    if (!std::isfinite(v) || std::abs(v) <= kNoise * scale) continue;
    const int sign = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && sign != last_sign) {
      try {
        cuts.push_back(brent_root(raw, last_x, x, 1e-13));
      } catch (const Error&) {
      }
    }
    last_sign = sign;
    last_x = x;
  }
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double x) { return std::abs(s(x, nullptr)); };
  try {
    return integrate(integrand, lo, kInf, cfg, cuts);
  } catch (const AccuracyError& e) {
    QuadratureResult r;
    r.value = e.best_estimate();
    r.error_estimate = e.error_estimate();
    r.subdivisions_used = cfg.max_subdivisions;
    return r;
  }
}

double lower_limit(const Law& P, const Law& Q) { return std::min(P.left_endpoint(), Q.left_endpoint()); }

}  // namespace

DistanceValue kolmogorov(const Law& P, const Law& Q, double* location) {
  auto gap = [&](double x) { return std::abs(cdf_gap(P, Q, x)); };
  const auto xs = merged_probes(P, Q, kKolGrid);
  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = gap(xs[i]);

  double best = 0.0;
  double best_x = xs.empty() ? 0.0 : xs.front();
  double best_err = 0.0;

  // jumps at the atoms: compare the left limits as well
  for (double c : {P.left_endpoint(), Q.left_endpoint()}) {
    if (!std::isfinite(c)) continue;
    const double left = std::abs(cdf_left(P, c) - cdf_left(Q, c));
    const double at = gap(c);
    for (double v : {left, at}) {
      if (v > best) {
        best = v;
        best_x = c;
      }
    }
  }

  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool left_ok = i == 0 || d[i] >= d[i - 1];
    const bool right_ok = i + 1 == xs.size() || d[i] >= d[i + 1];
    if (left_ok && right_ok) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
  if (peaks.size() > static_cast<std::size_t>(kKolRefine)) peaks.resize(kKolRefine);

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (std::size_t i : peaks) {
    double a = xs[i > 0 ? i - 1 : i];
    double b = xs[i + 1 < xs.size() ? i + 1 : i];
    if (d[i] > best) {
      best = d[i];
      best_x = xs[i];
    }
    if (!(b > a)) continue;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = gap(x1);
    double f2 = gap(x2);
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
      if (f1 >= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - invphi * (b - a);
        f1 = gap(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + invphi * (b - a);
        f2 = gap(x2);
      }
    }
    const double xm = f1 >= f2 ? x1 : x2;
    const double fm = std::max(f1, f2);
    if (fm > best) {
      best = fm;
      best_x = xm;
      // |F_P - F_Q| is Lipschitz with constant max(p, q) near the peak
      const double lip = std::max(P.pdf(xm), Q.pdf(xm));
      best_err = lip * (b - a);
    }
  }
  if (location) *location = best_x;
  return {best, best_err + 4.0 * std::numeric_limits<double>::epsilon() * std::max(best, 1e-300)};
}

DistanceValue total_variation(const Law& P, const Law& Q, const QuadratureConfig& cfg) {
  cfg.validate();
  const double p0 = P.starting_mass();
  const double q0 = Q.starting_mass();
  const double atoms = P.left_endpoint() == Q.left_endpoint() ? std::abs(p0 - q0) : p0 + q0;
  auto s = [&](double x, double* scale) {
    const double p = P.pdf(x);
    const double q = Q.pdf(x);
    if (scale) *scale = p + q;
    return p - q;
  };
  const QuadratureResult r = abs_integral(s, lower_limit(P, Q), merged_probes(P, Q, cfg.probe_points), cfg);
  return {(atoms + r.value) / 2.0, r.error_estimate / 2.0};
}

DistanceValue wasserstein(const Law& P, const Law& Q, const QuadratureConfig& cfg) {
  cfg.validate();
  for (const Law* L : {&P, &Q}) {
    if (!has_finite_mean(*L)) {
      throw Error(ErrorCode::nonexistent_mean, "Wasserstein distance needs finite means, " + L->label() + " has none");
    }
  }
  auto s = [&](double x, double* scale) { return cdf_gap(P, Q, x, scale); };
  const double lo = lower_limit(P, Q);
  const auto probes = merged_probes(P, Q, cfg.probe_points);
  if (std::isfinite(lo)) {
    const QuadratureResult r = abs_integral(s, lo, probes, cfg);
    return {r.value, r.error_estimate};
  }
  // two-sided support: split at the first probe
  const double mid = probes.empty() ? 0.0 : probes.front();
  auto integrand = [&](double x) { return std::abs(s(x, nullptr)); };
  QuadratureResult left;
  try {
    left = integrate(integrand, -kInf, mid, cfg);
  } catch (const AccuracyError& e) {
    left.value = e.best_estimate();
    left.error_estimate = e.error_estimate();
  }
  const QuadratureResult right = abs_integral(s, mid, probes, cfg);
  return {left.value + right.value, left.error_estimate + right.error_estimate};
}

OracleReport exact_oracle(const Law& P, const Law& Q, const QuadratureConfig& cfg) {
  OracleReport out;
  out.method = OracleReport::Method::exact_cdf;
  out.p_label = P.label();
  out.q_label = Q.label();
  out.kol = kolmogorov(P, Q, &out.kol_location);
  out.tv = total_variation(P, Q, cfg);
  if (has_finite_mean(P) && has_finite_mean(Q)) {
    out.wass = wasserstein(P, Q, cfg);
  } else {
    out.notes.push_back("no Wasserstein distance: a mean is infinite");
  }
  return out;
}

OracleReport monte_carlo_distances(std::shared_ptr<const Law> F, std::uint64_t n, double alpha,
                                   std::uint64_t samples, std::uint64_t seed, std::optional<double> a_n,
                                   ScalingMode mode) {
  if (!F) throw Error(ErrorCode::invalid_parameter, "monte_carlo_distances: null law");
  if (samples < 1000) {
    throw Error(ErrorCode::invalid_parameter, "monte_carlo_distances: need at least 1000 samples");
  }
  if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_parameter, "monte_carlo_distances: alpha must be positive");
  const auto Fn = maxima(F, n, a_n, mode);
  const FrechetLaw phi(alpha);

  std::mt19937_64 rng(seed);
  std::vector<double> x(samples);
  const bool want_wass = alpha > 1.0 && has_finite_mean(*Fn);
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    // midpoint of a 2^-53 cell: never 0 or 1
    const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
    x[i] = u > 0.5 ? Fn->survival_quantile(1.0 - u) : Fn->quantile(u);
    if (want_wass) {
      const double y = u > 0.5 ? phi.survival_quantile(1.0 - u) : phi.quantile(u);
      const double dv = std::abs(x[i] - y);
      sum += dv;
      sum2 += dv * dv;
    }
  }
  std::sort(x.begin(), x.end());
  const double N = static_cast<double>(samples);
  double kol = 0.0;
  double kol_x = x.front();
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double g = phi.cdf(x[i]);
    const double v = std::max(static_cast<double>(i + 1) / N - g, g - static_cast<double>(i) / N);
    if (v > kol) {
      kol = v;
      kol_x = x[i];
    }
  }

  OracleReport out;
  out.method = OracleReport::Method::monte_carlo;
  out.samples = samples;
  out.p_label = Fn->label();
  out.q_label = phi.label();
  out.kol = DistanceValue{kol, std::sqrt(std::log(2.0 / 0.05) / (2.0 * N))};
  out.kol_location = kol_x;
  out.notes.push_back("total variation is not estimated from samples");
  if (want_wass) {
    const double m = sum / N;
    const double var = std::max(0.0, sum2 / N - m * m) * N / (N - 1.0);
    out.wass = DistanceValue{m, std::sqrt(var / N)};
  } else {
    out.notes.push_back("no Wasserstein estimate: a mean is infinite");
  }
  return out;
}

}  // namespace fstein
