#include "fstein/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "fstein/error.hpp"

namespace fstein {

namespace {

// Kronrod 21-point abscissae (positive half) with the embedded 10-point
// Gauss rule on the odd entries.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208745989315, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;

enum class Map { finite, upper_infinite, lower_infinite };

// One initial panel, in its own integration variable t.
struct Panel {
  Map map = Map::finite;
  double anchor = 0.0;
  double scale = 1.0;
  double t0 = 0.0;
  double t1 = 0.0;
};

struct Segment {
  int panel = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool frozen = false;
};

struct ByError {
  const std::vector<Segment>* segs;
  bool operator()(int a, int b) const { return (*segs)[a].error < (*segs)[b].error; }
};

class Integrator {
 public:
  Integrator(const RealFunction& f, std::vector<Panel> panels) : f_(f), panels_(std::move(panels)) {}

  double eval(const Panel& p, double t) const {
    double x = t;
    double jac = 1.0;
    if (p.map != Map::finite) {
      const double u = 1.0 - t;
      const double d = p.scale * t / u;
      x = p.map == Map::upper_infinite ? p.anchor + d : p.anchor - d;
      jac = p.scale / (u * u);
      if (!std::isfinite(x)) return 0.0;
    }
    const double v = f_(x);
    if (std::isnan(v)) {
      throw Error(ErrorCode::evaluation, "integrand is NaN at x = " + std::to_string(x));
    }
    if (std::abs(v) < kTiny) return 0.0;
    return v * jac;
  }

  // Gauss-Kronrod 21 with QUADPACK's error heuristic.
  void rule(Segment& s) const {
    const Panel& p = panels_[s.panel];
    const double centr = 0.5 * (s.t0 + s.t1);
    const double hlgth = 0.5 * (s.t1 - s.t0);
    const double fc = eval(p, centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    std::array<double, 10> fv1{}, fv2{};
    for (int j = 0; j < 10; ++j) {
      const double dx = hlgth * kXgk[j];
      const double f1 = eval(p, centr - dx);
      const double f2 = eval(p, centr + dx);
      fv1[j] = f1;
      fv2[j] = f2;
      resk += kWgk[j] * (f1 + f2);
      resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
      if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    const double reskh = resk * 0.5;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
      resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double result = resk * hlgth;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double err = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
    s.value = result;
    s.error = err;
    if (!std::isfinite(result)) {
      throw Error(ErrorCode::divergent, "integral is not finite on a panel");
    }
  }

  QuadratureResult run(const QuadratureConfig& cfg) {
    std::vector<Segment> segs;
    segs.reserve(panels_.size() + static_cast<std::size_t>(cfg.max_subdivisions) * 2);
    for (int i = 0; i < static_cast<int>(panels_.size()); ++i) {
      Segment s{i, panels_[i].t0, panels_[i].t1};
      rule(s);
      segs.push_back(s);
    }
    std::priority_queue<int, std::vector<int>, ByError> heap(ByError{&segs});
    double total = 0.0;
    double total_err = 0.0;
    for (int i = 0; i < static_cast<int>(segs.size()); ++i) {
      heap.push(i);
      total += segs[i].value;
      total_err += segs[i].error;
    }
    int used = 0;
    double frozen_err = 0.0;
    auto converged = [&] { return total_err <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
    while (!converged()) {
      if (heap.empty()) {
        // every remaining segment sits at the resolution limit
        throw AccuracyError("quadrature: roundoff limit reached before tolerance", total, total_err);
      }
      if (used >= cfg.max_subdivisions) {
        throw AccuracyError("quadrature: subdivision budget of " + std::to_string(cfg.max_subdivisions) +
                                " exhausted",
                            total, total_err);
      }
      const int top = heap.top();
      heap.pop();
      Segment parent = segs[top];
      const double mid = 0.5 * (parent.t0 + parent.t1);
      if (!(mid > parent.t0 && mid < parent.t1) ||
          parent.t1 - parent.t0 <= 8.0 * kEps * std::max(std::abs(parent.t0), std::abs(parent.t1))) {
        segs[top].frozen = true;
        frozen_err += parent.error;
        continue;
      }
      Segment left{parent.panel, parent.t0, mid};
      Segment right{parent.panel, mid, parent.t1};
      rule(left);
      rule(right);
      ++used;
      total += left.value + right.value - parent.value;
      total_err += left.error + right.error - parent.error;
      segs[top] = left;
      segs.push_back(right);
      heap.push(top);
      heap.push(static_cast<int>(segs.size()) - 1);
    }
    (void)frozen_err;
    // Deterministic final summation in panel order.
    std::sort(segs.begin(), segs.end(), [](const Segment& a, const Segment& b) {
      return a.panel != b.panel ? a.panel < b.panel : a.t0 < b.t0;
    });
    QuadratureResult out;
    for (const auto& s : segs) {
      out.value += s.value;
      out.error_estimate += s.error;
    }
    out.subdivisions_used = used;
    return out;
  }

 private:
  const RealFunction& f_;
  std::vector<Panel> panels_;
};

double default_scale(double anchor) { return std::max(1.0, std::abs(anchor)); }

}  // namespace

void QuadratureConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw Error(ErrorCode::invalid_parameter, "quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw Error(ErrorCode::invalid_parameter, "max_subdivisions must be at least 1");
  }
  if (probe_points < 2) {
    throw Error(ErrorCode::invalid_parameter, "probe_points must be at least 2");
  }
}

QuadratureResult integrate(const RealFunction& f, double a, double b, const QuadratureConfig& cfg,
                           std::span<const double> breakpoints) {
  cfg.validate();
  if (std::isnan(a) || std::isnan(b) || !(a < b)) {
    throw Error(ErrorCode::domain, "integrate: need a < b");
  }
  std::vector<double> cuts{a};
  for (double c : breakpoints) {
    if (c > a && c < b && std::isfinite(c)) cuts.push_back(c);
  }
  if (std::isinf(a) && std::isinf(b) && cuts.size() == 1) cuts.push_back(0.0);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (std::isinf(hi)) {
      panels.push_back({Map::upper_infinite, lo, default_scale(lo), 0.0, 1.0});
    } else if (std::isinf(lo)) {
      panels.push_back({Map::lower_infinite, hi, default_scale(hi), 0.0, 1.0});
    } else {
      panels.push_back({Map::finite, 0.0, 1.0, lo, hi});
    }
  }
  Integrator integrator(f, std::move(panels));
  return integrator.run(cfg);
}

double brent_root(const RealFunction& f, double lo, double hi, double rel_tol) {
  double a = lo, b = hi;
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (std::isnan(fa) || std::isnan(fb) || (fa > 0.0) == (fb > 0.0)) {
    throw Error(ErrorCode::inversion, "brent_root: interval does not bracket a sign change");
  }
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < 300; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * kEps * std::abs(b) + 0.5 * rel_tol * std::abs(b) + 1e-300;
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;
    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q, r;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        q = fa / fc;
        r = fb / fc;
        p = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0));
        q = (q - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol ? d : (m > 0.0 ? tol : -tol);
    fb = f(b);
    if (std::isnan(fb)) throw Error(ErrorCode::inversion, "brent_root: function returned NaN");
  }
  return b;
}

std::vector<double> find_sign_changes(const RealFunction& s, std::span<const double> probes) {
  std::vector<double> roots;
  int last = -1;  // index of last probe with nonzero value
  double last_val = 0.0;
  for (int i = 0; i < static_cast<int>(probes.size()); ++i) {
    const double v = s(probes[i]);
    if (std::isnan(v)) continue;
    if (v == 0.0) {
      roots.push_back(probes[i]);
      last = -1;
      continue;
    }
    if (last >= 0 && (v > 0.0) != (last_val > 0.0)) {
      roots.push_back(brent_root(s, probes[last], probes[i], 1e-13));
    }
    last = i;
    last_val = v;
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<double> find_sign_changes(const RealFunction& s, double a, double b, int probes) {
  if (!(a < b) || probes < 2) {
    throw Error(ErrorCode::domain, "find_sign_changes: need a < b and at least two probes");
  }
  std::vector<double> grid;
  if (a >= 0.0 && (std::isinf(b) || b > 100.0 * std::max(a, 1e-300))) {
    const double lo = a > 0.0 ? a : (std::isinf(b) ? 1e-10 : b * 1e-10);
    const double hi = std::isinf(b) ? 1e10 * std::max(1.0, lo) : b;
    grid = log_spaced(lo, hi, probes);
  } else if (std::isinf(a) || std::isinf(b)) {
    const double lo = std::isinf(a) ? -1e10 : a;
    const double hi = std::isinf(b) ? 1e10 : b;
    // symmetric log grid around zero for doubly wide ranges
    const auto pos = log_spaced(1e-10, std::max(std::abs(lo), std::abs(hi)), probes / 2);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) {
      if (-*it >= lo) grid.push_back(-*it);
    }
    for (double p : pos) {
      if (p <= hi) grid.push_back(p);
    }
  } else {
    grid = lin_spaced(a, b, probes);
  }
  return find_sign_changes(s, grid);
}

QuadratureResult integrate_abs(const RealFunction& s, double a, double b, const QuadratureConfig& cfg,
                               std::span<const double> probes) {
  std::vector<double> kinks;
  std::vector<double> cuts;
  if (probes.empty()) {
    kinks = find_sign_changes(s, a, b, cfg.probe_points);
  } else {
    kinks = find_sign_changes(s, probes);
    cuts.assign(probes.begin(), probes.end());
  }
  cuts.insert(cuts.end(), kinks.begin(), kinks.end());
  auto abs_s = [&s](double x) { return std::abs(s(x)); };
  QuadratureResult r = integrate(abs_s, a, b, cfg, cuts);
  r.kinks = std::move(kinks);
  return r;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw Error(ErrorCode::domain, "log_spaced: need 0 < lo < hi and count >= 2");
  }
  std::vector<double> out(count);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_spaced(double lo, double hi, int count) {
  if (!(hi > lo) || count < 2) throw Error(ErrorCode::domain, "lin_spaced: need lo < hi and count >= 2");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = lo + (hi - lo) * i / (count - 1);
  out.back() = hi;
  return out;
}

}  // namespace fstein
