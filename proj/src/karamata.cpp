#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fstein/error.hpp"
#include "fstein/karamata.hpp"

namespace fstein {

namespace {

// Rounding allowance for envelopes fitted to exact power laws.
constexpr double kSlackRel = 1e-10;
constexpr double kSlackAbs = 1e-12;

double checked(const RealFunction& f, double x) {
  const double v = f(x);
  if (!(v > 0.0) || !std::isfinite(v)) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "non-positive value %.6g probed at x = %.6g", v, x);
    throw Error(ErrorCode::domain, buf);
  }
  return v;
}

double slope(std::span<const double> lx, std::span<const double> ly) {
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<double> default_t_grid(double t_max) {
  if (!(t_max > 1e2)) throw Error(ErrorCode::invalid_parameter, "t_max must exceed 100");
  return log_spaced(1e2, t_max, 20);
}

std::vector<double> default_x_grid() { return log_spaced(1e-2, 1e2, 41); }

double estimate_index(const RealFunction& f, std::span<const double> t_grid, std::span<const double> x_grid) {
  if (t_grid.empty() || x_grid.size() < 2) {
    throw Error(ErrorCode::invalid_parameter, "estimate_index: need a t grid and at least two x values");
  }
  const std::size_t top = std::max<std::size_t>(1, (t_grid.size() + 3) / 4);
  std::vector<double> lx(x_grid.size());
  for (std::size_t j = 0; j < x_grid.size(); ++j) lx[j] = std::log(x_grid[j]);
  double total = 0.0;
  std::vector<double> ly(x_grid.size());
  for (std::size_t i = t_grid.size() - top; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    const double ft = checked(f, t);
    for (std::size_t j = 0; j < x_grid.size(); ++j) ly[j] = std::log(checked(f, t * x_grid[j]) / ft);
    total += slope(lx, ly);
  }
  return total / static_cast<double>(top);
}

std::vector<double> karamata_limit(const Law& F, std::span<const double> t_grid, std::vector<std::string>* warnings) {
  std::vector<double> out;
  for (double t : t_grid) {
    const double s = F.survival(t);
    const double p = F.pdf(t);
    if (!(s > 0.0) || !(p > 0.0)) {
      if (warnings) warnings->push_back("karamata ratio truncated at t = " + num(t) + " (underflow)");
      break;
    }
    out.push_back(t * p / s);
  }
  return out;
}

std::vector<PotterViolation> potter_check(const RealFunction& f, double rho, double delta, double t_min,
                                          std::span<const double> t_grid, std::span<const double> x_grid,
                                          PotterFit* fit) {
  std::vector<double> ts;
  for (double t : t_grid) {
    if (t >= t_min) ts.push_back(t);
  }
  PotterFit pf;
  pf.c = 1.0;  // the ratio is exactly 1 at x = 1
  if (ts.empty() || x_grid.empty()) {
    if (fit) *fit = pf;
    return {};
  }
  // probes outside the support of f are skipped
  auto ratio = [&](double t, double x) -> std::optional<double> {
    const double top = f(t * x);
    const double den = f(t);
    if (!(top > 0.0) || !(den > 0.0) || !std::isfinite(top) || !std::isfinite(den)) return std::nullopt;
    return top / den;
  };
  auto width = [&](double x) { return std::max(std::pow(x, rho + delta), std::pow(x, rho - delta)); };

  const double t_hi = ts.back();
  for (double x : x_grid) {
    if (x > 1.0) continue;
    if (auto r = ratio(t_hi, x)) pf.c = std::max(pf.c, *r / std::pow(x, rho - delta));
  }
  const double t_lo = ts.front();
  for (double x : x_grid) {
    if (auto r = ratio(t_lo, x)) pf.epsilon = std::max(pf.epsilon, std::abs(*r - std::pow(x, rho)) / width(x));
  }

  std::vector<PotterViolation> out;
  for (double t : ts) {
    for (double x : x_grid) {
      const auto r = ratio(t, x);
      if (!r) continue;
      if (x <= 1.0) {
        const double bound = pf.c * std::pow(x, rho - delta);
        if (*r > bound * (1.0 + kSlackRel)) out.push_back({t, x, bound, *r, "small-x"});
      }
      const double bound = pf.epsilon * width(x);
      const double dev = std::abs(*r - std::pow(x, rho));
      if (dev > bound * (1.0 + kSlackRel) + kSlackAbs * width(x)) out.push_back({t, x, bound, dev, "drees"});
    }
  }
  if (fit) *fit = pf;
  return out;
}

std::vector<std::pair<std::uint64_t, double>> da_check(const Law& F, std::span<const std::uint64_t> n_grid,
                                                        const std::function<double(std::uint64_t)>& a_n) {
  std::vector<std::pair<std::uint64_t, double>> out;
  for (std::uint64_t n : n_grid) out.emplace_back(n, static_cast<double>(n) * F.survival(a_n(n)));
  return out;
}

std::vector<std::pair<std::uint64_t, double>> da_check(const Law& F, std::span<const std::uint64_t> n_grid,
                                                        ScalingMode mode) {
  return da_check(F, n_grid, [&](std::uint64_t n) { return scaling_sequence(F, n, mode); });
}

RVReport rv_report(const Law& F, const RVOptions& opts) {
  RVReport rep;
  rep.law = F.label();
  rep.alpha = F.tail_index();
  auto r = [&](double x) { return F.reverse_hazard(x); };

  const auto t_all = default_t_grid(opts.t_max);
  // keep every probe t x inside the support
  const double floor = std::max(1.0, 2.0 * F.left_endpoint());
  for (double x : default_x_grid()) {
    if (t_all.front() * x >= floor) rep.x_grid.push_back(x);
  }
  if (rep.x_grid.size() < 41) {
    rep.notes.push_back("x grid starts at " + num(rep.x_grid.front()) + " to keep t x above the left endpoint");
  }
  for (double t : t_all) {
    std::vector<double> row;
    const double rt = r(t);
    bool ok = rt > 0.0 && std::isfinite(rt);
    for (double x : rep.x_grid) {
      if (!ok) break;
      const double v = r(t * x);
      ok = v > 0.0 && std::isfinite(v);
      row.push_back(v / rt);
    }
    if (!ok) {
      rep.notes.push_back("t grid truncated at t = " + num(t) + " (reverse hazard underflow)");
      break;
    }
    rep.t_grid.push_back(t);
    rep.ratio_table.push_back(std::move(row));
  }
  rep.estimated_index = estimate_index(r, rep.t_grid, rep.x_grid);
  rep.karamata_ratio = karamata_limit(F, rep.t_grid, &rep.notes);

  const double rho = rep.alpha ? -*rep.alpha - 1.0 : rep.estimated_index;
  rep.potter_violations =
      potter_check(r, rho, opts.potter_delta, rep.t_grid.front(), rep.t_grid, rep.x_grid, &rep.potter_fit);
  rep.notes.push_back("Potter constants are fitted to the data; they check the form of the bound only");

  try {
    rep.n_tail_check = da_check(F, opts.n_grid, opts.scaling);
    if (!rep.n_tail_check.empty() && std::abs(rep.n_tail_check.back().second - 1.0) > 0.05) {
      rep.notes.push_back("n(1 - F(a_n)) is far from 1 at the largest n: check a_n");
    }
  } catch (const Error& e) {
    rep.notes.push_back(std::string("no n(1 - F(a_n)) check: ") + e.what());
  }
  return rep;
}

std::string RVReport::to_csv() const {
  std::ostringstream os;
  os << "# summary\nkey,value\n";
  os << "law,\"" << law << "\"\n";
  os << "alpha," << (alpha ? num(*alpha) : "") << "\n";
  os << "estimated_index," << num(estimated_index) << "\n";
  os << "expected_index," << (alpha ? num(-*alpha - 1.0) : "") << "\n";
  os << "potter_c," << num(potter_fit.c) << "\n";
  os << "potter_epsilon," << num(potter_fit.epsilon) << "\n";
  os << "\n# karamata_ratio\nt,ratio\n";
  for (std::size_t i = 0; i < karamata_ratio.size(); ++i) os << num(t_grid[i]) << "," << num(karamata_ratio[i]) << "\n";
  os << "\n# ratio_table\nt,x,ratio\n";
  for (std::size_t i = 0; i < ratio_table.size(); ++i) {
    for (std::size_t j = 0; j < ratio_table[i].size(); ++j) {
      os << num(t_grid[i]) << "," << num(x_grid[j]) << "," << num(ratio_table[i][j]) << "\n";
    }
  }
  os << "\n# potter_violations\nt,x,bound,observed,form\n";
  for (const auto& v : potter_violations) {
    os << num(v.t) << "," << num(v.x) << "," << num(v.bound) << "," << num(v.observed) << "," << v.form << "\n";
  }
  os << "\n# n_tail_check\nn,value\n";
  for (const auto& [n, v] : n_tail_check) os << n << "," << num(v) << "\n";
  os << "\n# notes\nnote\n";
  for (const auto& n : notes) os << "\"" << n << "\"\n";
  return os.str();
}

}  // namespace fstein
