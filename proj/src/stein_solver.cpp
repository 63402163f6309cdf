#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "fstein/error.hpp"
#include "fstein/solver.hpp"

namespace fstein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundTol = 1e-9;

QuadratureConfig panel_config(const QuadratureConfig& base, double scale) {
  QuadratureConfig c = base;
  c.rel_tol = 1e-12;
  c.abs_tol = std::max(1e-300, 1e-13 * scale);
  c.max_subdivisions = std::max(base.max_subdivisions, 400);
  return c;
}

// P-mass of [a, b] taken from whichever tail is accurate.
double mass(const Law& P, double a, double b, double median) {
  if (b <= median) return P.cdf(b) - (std::isfinite(a) ? P.cdf(a) : 0.0);
  return (std::isfinite(a) ? P.survival(a) : 1.0) - (std::isfinite(b) ? P.survival(b) : 0.0);
}

std::vector<double> inside(std::span<const double> pts, double a, double b) {
  std::vector<double> out;
  for (double p : pts) {
    if (p > a && p < b) out.push_back(p);
  }
  return out;
}

}  // namespace

// --------------------------------------------------------------------------
// Test functions

TestFunction TestFunction::halfline(double z) {
  TestFunction t;
  t.kind = Kind::indicator_halfline;
  t.z = z;
  t.h = [z](double x) { return x <= z ? 1.0 : 0.0; };
  t.breakpoints = {z};
  std::ostringstream os;
  os.precision(6);
  os << "1[x<=" << z << "]";
  t.label = os.str();
  return t;
}

TestFunction TestFunction::set(std::vector<std::pair<double, double>> intervals) {
  TestFunction t;
  t.kind = Kind::indicator_set;
  std::ostringstream os;
  os.precision(6);
  os << "1[x in ";
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto [lo, hi] = intervals[i];
    if (!(lo <= hi)) throw Error(ErrorCode::invalid_parameter, "set indicator: interval with lo > hi");
    t.breakpoints.push_back(lo);
    t.breakpoints.push_back(hi);
    os << (i ? " u " : "") << "[" << lo << "," << hi << "]";
  }
  os << "]";
  t.label = os.str();
  t.intervals = intervals;
  t.h = [iv = std::move(intervals)](double x) {
    for (const auto& [lo, hi] : iv) {
      if (x >= lo && x <= hi) return 1.0;
    }
    return 0.0;
  };
  return t;
}

TestFunction TestFunction::lipschitz(RealFunction h, std::string label, std::vector<double> breakpoints) {
  TestFunction t;
  t.kind = Kind::lipschitz;
  t.h = std::move(h);
  t.label = std::move(label);
  t.breakpoints = std::move(breakpoints);
  return t;
}

// --------------------------------------------------------------------------
// SteinSolution

SteinSolution::SteinSolution(std::shared_ptr<const Law> P, TestFunction h, const QuadratureConfig& cfg)
    : P_(std::move(P)), h_(std::move(h)), cfg_(cfg) {
  if (!P_) throw Error(ErrorCode::invalid_parameter, "solve: null law");
  if (!h_.h) throw Error(ErrorCode::invalid_parameter, "solve: empty test function");
  if (P_->starting_mass() > 0.0) {
    throw Error(ErrorCode::precondition, "solve: the reference law must be atomless");
  }
  cfg_.validate();
  median_ = P_->quantile(0.5);
  const double c = P_->left_endpoint();
  knots_ = probe_grid(*P_, 128);
  knots_.push_back(median_);
  for (double b : h_.breakpoints) {
    if (b > c && std::isfinite(b)) knots_.push_back(b);
  }
  std::sort(knots_.begin(), knots_.end());
  knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());

  const std::size_t K = knots_.size();
  left_.assign(K, 0.0);
  right_.assign(K, 0.0);
  std::vector<double> inner(K > 0 ? K - 1 : 0);
  for (std::size_t k = 0; k + 1 < K; ++k) inner[k] = panel(knots_[k], knots_[k + 1]);
  left_[0] = panel(c, knots_[0]);
  for (std::size_t k = 1; k < K; ++k) left_[k] = left_[k - 1] + inner[k - 1];
  right_[K - 1] = panel(knots_[K - 1], kInf);
  for (std::size_t k = K - 1; k-- > 0;) right_[k] = right_[k + 1] + inner[k];
  mean_h_ = left_[K - 1] + right_[K - 1];
  if (!std::isfinite(mean_h_)) throw Error(ErrorCode::divergent, "solve: h is not integrable under P");
}

double SteinSolution::panel(double a, double b) const {
  if (!(a < b)) return 0.0;
  const Law& P = *P_;
  double hscale = 1.0;
  if (std::isfinite(a)) hscale += std::abs(h_.h(a));
  if (std::isfinite(b)) hscale += std::abs(h_.h(b));
  const QuadratureConfig c = panel_config(cfg_, mass(P, a, b, median_) * hscale);
  const auto bp = inside(h_.breakpoints, a, b);
  auto f = [&](double x) {
    const double p = P.pdf(x);
    return p == 0.0 ? 0.0 : h_.h(x) * p;
  };
  try {
    return integrate(f, a, b, c, bp).value;
  } catch (const AccuracyError& e) {
    // rounding-limited panel; its estimate is still far inside the target
    return e.best_estimate();
  }
}

double SteinSolution::left_integral(double x) const {
  const double c = P_->left_endpoint();
  if (x <= c) return 0.0;
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.begin()) return panel(c, x);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return left_[k] + panel(knots_[k], x);
}

double SteinSolution::right_integral(double x) const {
  auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
  if (it == knots_.end()) return panel(x, kInf);
  const std::size_t k = static_cast<std::size_t>(it - knots_.begin());
  return right_[k] + panel(x, knots_[k]);
}

double SteinSolution::evaluate(double x) const {
  const Law& P = *P_;
  if (!(x > P.left_endpoint())) return 0.0;
  const double Px = P.cdf(x);
  if (Px == 0.0) return h_.h(x) - mean_h_;  // the limit at c_P
  if (x <= median_) return (left_integral(x) - mean_h_ * Px) / Px;
  return (mean_h_ * P.survival(x) - right_integral(x)) / Px;
}

double SteinSolution::derivative_form(double x) const {
  if (!(x > P_->left_endpoint())) return 0.0;
  return h_.h(x) - mean_h_ - evaluate(x);
}

std::vector<double> SteinSolution::evaluate_on_grid(std::span<const double> xs) const {
  std::vector<double> out;
  out.reserve(xs.size());
  for (double x : xs) out.push_back(evaluate(x));
  return out;
}

SteinSolution solve(std::shared_ptr<const Law> P, TestFunction h, const QuadratureConfig& cfg) {
  return SteinSolution(std::move(P), std::move(h), cfg);
}

// --------------------------------------------------------------------------
// Closed forms

double indicator_solution(const Law& P, double z, double x) {
  if (!(z > P.left_endpoint())) {
    throw Error(ErrorCode::domain, "indicator_solution: degenerate test function, z <= c_P");
  }
  if (!(x > P.left_endpoint())) return 0.0;
  if (x <= z) return P.survival(z);
  return P.cdf(z) * P.survival(x) / P.cdf(x);
}

double indicator_derivative_form(const Law& P, double z, double x) {
  if (!(z > P.left_endpoint())) {
    throw Error(ErrorCode::domain, "indicator_derivative_form: degenerate test function, z <= c_P");
  }
  if (!(x > P.left_endpoint()) || x <= z) return 0.0;
  // d/dx [P(z) Pbar(x)/P(x)] = -P(z) p(x)/P(x)^2
  return -P.cdf(z) / P.cdf(x);
}

double stein_operator(const Law& P, const RealFunction& f, const RealFunction& derivative_form, double x) {
  if (!(x > P.left_endpoint())) return 0.0;
  return derivative_form(x) + f(x);
}

// --------------------------------------------------------------------------
// Envelope

std::vector<Envelope> envelope_on_grid(const Law& P, std::span<const double> xs, const QuadratureConfig& cfg) {
  if (!has_finite_mean(P)) {
    throw Error(ErrorCode::nonexistent_mean, "envelope: " + P.label() + " has no finite mean");
  }
  cfg.validate();
  const double c = P.left_endpoint();
  std::vector<double> pts(xs.begin(), xs.end());
  for (double x : pts) {
    if (!(x > c) || !std::isfinite(x)) throw Error(ErrorCode::domain, "envelope: x must exceed c_P");
  }
  std::vector<std::size_t> order(pts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });

  QuadratureConfig pc = cfg;
  pc.abs_tol = 1e-300;
  pc.rel_tol = 1e-12;
  pc.max_subdivisions = std::max(cfg.max_subdivisions, 400);
  const auto probes = probe_grid(P, 64);
  auto cdf_int = [&](double a, double b) {
    if (!(a < b)) return 0.0;
    return integrate([&](double t) { return P.cdf(t); }, a, b, pc, inside(probes, a, b)).value;
  };
  auto sf_int = [&](double a, double b) {
    if (!(a < b)) return 0.0;
    return integrate([&](double t) { return P.survival(t); }, a, b, pc, inside(probes, a, b)).value;
  };

  const std::size_t n = pts.size();
  std::vector<double> A(n), B(n);
  double acc = 0.0;
  double prev = c;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pts[order[i]];
    acc += cdf_int(prev, x);
    A[order[i]] = acc;
    prev = x;
  }
  acc = 0.0;
  prev = kInf;
  for (std::size_t i = n; i-- > 0;) {
    const double x = pts[order[i]];
    acc += sf_int(x, prev);
    B[order[i]] = acc;
    prev = x;
  }
  std::vector<Envelope> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = pts[i];
    const double F = P.cdf(x);
    const double S = P.survival(x);
    out[i].m = A[i] + B[i];
    out[i].e1 = std::min(F, S) / F;
    out[i].e2 = std::min(A[i], B[i]) / F;
  }
  return out;
}

Envelope envelope(const Law& P, double x, const QuadratureConfig& cfg) {
  const double xs[1] = {x};
  return envelope_on_grid(P, xs, cfg).front();
}

std::vector<double> quantile_grid(const Law& P, int count) {
  if (count < 2) throw Error(ErrorCode::invalid_parameter, "quantile_grid: need at least two points");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (double u : lin_spaced(1e-6, 1.0 - 1e-6, count)) out.push_back(P.quantile(u));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// --------------------------------------------------------------------------
// Bound checks on a quantile grid

namespace {

void add_check(Proposition1Report& r, std::string item, const std::string& label, std::string quantity,
               const std::vector<double>& observed, const std::vector<double>& bound) {
  PropositionCheck c;
  c.item = std::move(item);
  c.test_function = label;
  c.quantity = std::move(quantity);
  c.max_slack = -kInf;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double slack = observed[i] - bound[i];
    c.max_slack = std::max(c.max_slack, slack);
    if (!(slack <= kBoundTol * std::max(1.0, bound[i]))) ++c.violations;
  }
  r.total_violations += c.violations;
  r.checks.push_back(std::move(c));
}

}  // namespace

Proposition1Report verify_proposition1(std::shared_ptr<const Law> P, int grid_size, const QuadratureConfig& cfg) {
  if (!P) throw Error(ErrorCode::invalid_parameter, "verify_proposition1: null law");
  Proposition1Report rep;
  rep.law = P->label();
  const auto grid = quantile_grid(*P, grid_size);
  rep.grid_size = static_cast<int>(grid.size());
  auto Q = [&](double u) { return P->quantile(u); };

  auto run = [&](const std::string& item, const TestFunction& tf, const std::vector<double>& fb,
                 const std::vector<double>& db) {
    SteinSolution s(P, tf, cfg);
    std::vector<double> f(grid.size()), d(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      f[i] = s.evaluate(grid[i]);
      d[i] = tf.h(grid[i]) - s.mean_h() - f[i];
      f[i] = std::abs(f[i]);
      d[i] = std::abs(d[i]);
    }
    add_check(rep, item, tf.label, "|f|", f, fb);
    add_check(rep, item, tf.label, "(P/p)|f'|", d, db);
  };

  const std::vector<double> one(grid.size(), 1.0), two(grid.size(), 2.0);

  // item 1: Borel sets
  const std::vector<std::vector<std::pair<double, double>>> sets = {
      {{Q(0.1), Q(0.3)}},
      {{Q(0.4), Q(0.6)}},
      {{Q(0.7), Q(0.99)}},
      {{Q(1e-4), Q(0.05)}},
      {{Q(0.02), Q(0.2)}, {Q(0.5), Q(0.9)}},
      {{Q(0.25), Q(0.5)}, {Q(0.75), Q(0.999)}},
  };
  for (const auto& s : sets) run("item1", TestFunction::set(s), one, two);

  // item 2: half-lines, and the Stein identity on their closed-form solutions
  const auto probes = probe_grid(*P, 128);
  for (int k = 0; k < 20; ++k) {
    const double z = Q(0.025 + 0.05 * k);
    run("item2", TestFunction::halfline(z), one, one);

    std::vector<double> cuts = probes;
    cuts.push_back(z);
    auto integrand = [&](double x) {
      const double p = P->pdf(x);
      if (p == 0.0) return 0.0;
      return (indicator_derivative_form(*P, z, x) + indicator_solution(*P, z, x)) * p;
    };
    QuadratureConfig sc = cfg;
    sc.abs_tol = 1e-13;
    sc.rel_tol = 1e-12;
    double v;
    try {
      v = integrate(integrand, P->left_endpoint(), kInf, sc, cuts).value;
    } catch (const AccuracyError& e) {
      v = e.best_estimate();
    }
    rep.stein_identity_max = std::max(rep.stein_identity_max, std::abs(v));
    PropositionCheck c;
    c.item = "stein-identity";
    c.test_function = TestFunction::halfline(z).label;
    c.quantity = "|P(A_p f)|";
    c.max_slack = std::abs(v) - 1e-8;
    c.violations = std::abs(v) <= 1e-8 ? 0 : 1;
    rep.total_violations += c.violations;
    rep.checks.push_back(std::move(c));
  }

  // item 3: 1-Lipschitz functions
  if (!has_finite_mean(*P)) {
    rep.notes.push_back("item3 skipped: P has no finite mean");
    return rep;
  }
  const auto env = envelope_on_grid(*P, grid, cfg);
  std::vector<double> fb(grid.size()), db(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    fb[i] = env[i].m * env[i].e1 + env[i].e2;
    db[i] = env[i].m * (1.0 + env[i].e1) + env[i].e2;
  }
  const double q3 = Q(0.3), q5 = Q(0.5), q7 = Q(0.7), q9 = Q(0.9);
  const std::vector<TestFunction> lips = {
      TestFunction::lipschitz([](double x) { return x; }, "x"),
      TestFunction::lipschitz([q5](double x) { return std::min(x, q5); }, "min(x,q50)", {q5}),
      TestFunction::lipschitz([q9](double x) { return std::min(x, q9); }, "min(x,q90)", {q9}),
      TestFunction::lipschitz([q3](double x) { return std::abs(x - q3); }, "|x-q30|", {q3}),
      TestFunction::lipschitz([q7](double x) { return -std::max(x, q7); }, "-max(x,q70)", {q7}),
      TestFunction::lipschitz([](double x) { return std::sin(x); }, "sin(x)"),
  };
  for (const auto& tf : lips) run("item3", tf, fb, db);
  return rep;
}

std::string Proposition1Report::to_text() const {
  std::ostringstream os;
  os << "law: " << law << "\n";
  os << "grid points: " << grid_size << "\n";
  char buf[256];
  for (const auto& c : checks) {
    std::snprintf(buf, sizeof buf, "%-15s %-12s %-44s max_slack=% .3e violations=%d\n", c.item.c_str(),
                  c.quantity.c_str(), c.test_function.c_str(), c.max_slack, c.violations);
    os << buf;
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  std::snprintf(buf, sizeof buf, "stein identity max |P(A_p f)| = %.3e\n", stein_identity_max);
  os << buf;
  os << (passed() ? "PASS" : "FAIL") << " (" << total_violations << " violations)\n";
  return os.str();
}

}  // namespace fstein
