#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "fstein/distance.hpp"
#include "fstein/sweep.hpp"

namespace fstein {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

enum Col { kDelta, kDeltaErr, kDeltaW, kDeltaWErr, kKolB, kTvB, kWassB, kKolO, kTvO, kWassO };

void fail(SweepRow& row, std::initializer_list<Col> cols, const Error& e) {
  for (Col c : cols) row.cells[c] = SweepCell{std::nullopt, e.code()};
  row.notes.push_back(e.what());
}

SweepRow compute_row(const SweepSpec& spec, std::uint64_t n, const QuadratureConfig& cfg) {
  SweepRow row;
  row.n = n;
  FrechetOptions opts;
  opts.alpha = spec.alpha;
  opts.scaling = spec.scaling;
  opts.roles = spec.roles;

  FrechetPair pair;
  try {
    pair = frechet_pair(spec.dist, n, opts);
  } catch (const Error& e) {
    fail(row, {kDelta, kDeltaErr, kDeltaW, kDeltaWErr, kKolB, kTvB, kWassB, kKolO, kTvO, kWassO}, e);
    return row;
  }

  try {
    const BoundReport b = bounds(*pair.P, *pair.Q, cfg);
    row.cells[kDelta].value = b.delta;
    row.cells[kDeltaErr].value = b.delta_err;
    row.cells[kKolB].value = b.kol_bound;
    row.cells[kTvB].value = b.tv_bound;
    if (spec.weighted && b.delta_w) {
      row.cells[kDeltaW].value = *b.delta_w;
      row.cells[kDeltaWErr].value = b.delta_w_err;
      row.cells[kWassB].value = b.wass_bound;
    }
    row.notes.insert(row.notes.end(), b.notes.begin(), b.notes.end());
  } catch (const Error& e) {
    fail(row, {kDelta, kDeltaErr, kKolB, kTvB, kDeltaW, kDeltaWErr, kWassB}, e);
  }

  if (spec.with_oracle) {
    try {
      const OracleReport o = exact_oracle(*pair.P, *pair.Q, cfg);
      row.cells[kKolO].value = o.kol->value;
      row.cells[kTvO].value = o.tv->value;
      if (o.wass) row.cells[kWassO].value = o.wass->value;
    } catch (const Error& e) {
      fail(row, {kKolO, kTvO, kWassO}, e);
    }
  }
  return row;
}

}  // namespace

void SweepSpec::validate() const {
  if (!dist) throw Error(ErrorCode::validation, "sweep: no distribution given");
  if (n_values.empty()) throw Error(ErrorCode::validation, "sweep: n_values is empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw Error(ErrorCode::validation, "sweep: n must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) {
      throw Error(ErrorCode::validation, "sweep: n_values must be strictly increasing");
    }
  }
  if (alpha && !(*alpha > 0.0)) throw Error(ErrorCode::validation, "sweep: alpha must be positive");
}

std::string SweepCell::text() const {
  if (error) return "ERROR:" + std::string(to_string(*error));
  if (value) return g17(*value);
  return {};
}

const std::array<std::string_view, SweepRow::kColumns + 1>& sweep_columns() {
  static const std::array<std::string_view, SweepRow::kColumns + 1> cols = {
      "n", "delta", "delta_err", "delta_w", "delta_w_err", "kol_bound",
      "tv_bound", "wass_bound", "kol_oracle", "tv_oracle", "wass_oracle"};
  return cols;
}

std::string SweepResult::to_csv() const {
  std::string out;
  const auto& cols = sweep_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += cols[i];
  }
  out += '\n';
  for (const SweepRow& r : rows) {
    out += std::to_string(r.n);
    for (const SweepCell& c : r.cells) {
      out += ',';
      out += c.text();
    }
    out += '\n';
  }
  return out;
}

std::string SweepResult::to_svg() const {
  constexpr double W = 640, H = 420, L = 70, R = 20, T = 30, B = 50;
  std::vector<std::pair<double, double>> pts;
  for (const SweepRow& r : rows) {
    const auto& d = r.delta().value;
    if (d && *d > 0.0) pts.emplace_back(std::log10(static_cast<double>(r.n)), std::log10(*d));
  }
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
     << ' ' << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">delta vs n: "
     << law << "</text>\n";
  if (pts.empty()) {
    os << "<text x=\"" << W / 2 << "\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\">no data</text>\n</svg>\n";
    return os.str();
  }
  double x0 = pts.front().first, x1 = x0, y0 = pts.front().second, y1 = y0;
  for (auto [x, y] : pts) {
    x0 = std::min(x0, x);
    x1 = std::max(x1, x);
    y0 = std::min(y0, y);
    y1 = std::max(y1, y);
  }
  x0 = std::floor(x0);
  x1 = std::max(std::ceil(x1), x0 + 1);
  y0 = std::floor(y0);
  y1 = std::max(std::ceil(y1), y0 + 1);
  auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  os << "<g stroke=\"#999\" stroke-width=\"0.5\" font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double d = x0; d <= x1 + 1e-9; d += 1.0) {
    os << "<line x1=\"" << px(d) << "\" y1=\"" << T << "\" x2=\"" << px(d) << "\" y2=\"" << H - B << "\"/>\n";
    os << "<text x=\"" << px(d) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" stroke=\"none\">1e"
       << static_cast<int>(d) << "</text>\n";
  }
  for (double d = y0; d <= y1 + 1e-9; d += 1.0) {
    os << "<line x1=\"" << L << "\" y1=\"" << py(d) << "\" x2=\"" << W - R << "\" y2=\"" << py(d) << "\"/>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(d) + 4 << "\" text-anchor=\"end\" stroke=\"none\">1e"
       << static_cast<int>(d) << "</text>\n";
  }
  os << "</g>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">n</text>\n";
  os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    os << (i ? " " : "") << px(pts[i].first) << ',' << py(pts[i].second);
  }
  os << "\"/>\n";
  for (auto [x, y] : pts) os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"#1f5fa8\"/>\n";
  os << "</svg>\n";
  return os.str();
}

SweepResult run_sweep(const SweepSpec& spec, const QuadratureConfig& cfg) {
  spec.validate();
  cfg.validate();
  SweepResult out;
  out.law = spec.dist->label();
  out.rows.resize(spec.n_values.size());

  unsigned workers = spec.threads > 0 ? static_cast<unsigned>(spec.threads) : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(spec.n_values.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < spec.n_values.size(); i = next++) {
      out.rows[i] = compute_row(spec, spec.n_values[i], cfg);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

RateFit fit_rate(const std::vector<std::pair<std::uint64_t, double>>& series,
                 const std::function<std::optional<double>(std::uint64_t)>& rate) {
  if (series.size() < 3) throw Error(ErrorCode::validation, "fit_rate: need at least three points");
  std::vector<double> lx, ly;
  for (auto [n, v] : series) {
    if (!(v > 0.0) || !std::isfinite(v) || n < 1) {
      throw Error(ErrorCode::validation, "fit_rate: values must be positive, got " + g6(v) + " at n = " + std::to_string(n));
    }
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(v));
  }
  const double m = static_cast<double>(lx.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::validation, "fit_rate: n values must not all coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  // a constant series is fitted exactly
  fit.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  if (rate) {
    for (auto [n, v] : series) {
      if (auto c = rate(n)) fit.scaled_limits.emplace_back(n, *c * v);
    }
  }
  return fit;
}

FrechetCompareReport frechet_compare(double alpha, double beta, const QuadratureConfig& cfg) {
  FrechetCompareReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.delta_closed = frechet_vs_frechet(alpha, beta, false);
  const FrechetLaw P(beta);
  const FrechetLaw Q(alpha);
  const BoundReport b = bounds(P, Q, cfg);
  rep.delta_quadrature = b.delta;
  rep.delta_error = b.delta_err;
  // bounds from the closed form; the quadrature is the cross-check
  rep.kol_bound = rep.delta_closed;
  rep.tv_bound = 2.0 * rep.delta_closed;
  if (alpha > 1.0) {
    rep.delta_w_closed = frechet_vs_frechet(alpha, beta, true);
    rep.delta_w_quadrature = b.delta_w;
    rep.delta_w_error = b.delta_w_err;
    rep.wass_bound = 2.0 * *P.closed_form_mean() * rep.delta_closed + 3.0 * *rep.delta_w_closed;
  } else {
    rep.notes.push_back("Delta_w and the Wasserstein bound need alpha > 1");
  }
  const OracleReport o = exact_oracle(P, Q, cfg);
  rep.kol = o.kol->value;
  rep.tv = o.tv->value;
  if (o.wass) rep.wass = o.wass->value;
  return rep;
}

std::string FrechetCompareReport::to_text() const {
  std::ostringstream os;
  os << "Frechet(" << g6(alpha) << ") against reference Frechet(" << g6(beta) << ")\n";
  os << "delta        closed " << g17(delta_closed) << "  quadrature " << g17(delta_quadrature) << " +- "
     << g6(delta_error) << "  diff " << g6(std::abs(delta_closed - delta_quadrature)) << "\n";
  if (delta_w_closed) {
    os << "delta_w      closed " << g17(*delta_w_closed) << "  quadrature "
       << (delta_w_quadrature ? g17(*delta_w_quadrature) : std::string("n/a")) << " +- " << g6(delta_w_error);
    if (delta_w_quadrature) os << "  diff " << g6(std::abs(*delta_w_closed - *delta_w_quadrature));
    os << "\n";
  } else {
    os << "delta_w      n/a (alpha <= 1)\n";
  }
  os << "kolmogorov   bound " << g17(kol_bound) << "  exact " << g17(kol) << "\n";
  os << "total var.   bound " << g17(tv_bound) << "  exact " << g17(tv) << "\n";
  if (wass_bound) {
    os << "wasserstein  bound " << g17(*wass_bound) << "  exact " << (wass ? g17(*wass) : std::string("n/a")) << "\n";
  } else {
    os << "wasserstein  n/a\n";
  }
  for (const auto& n : notes) os << "note: " << n << "\n";
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.close();
  if (!f) throw Error(ErrorCode::io, "write to " + path + " failed");
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::vector<std::pair<std::uint64_t, double>> read_sweep_column(std::string_view csv, std::string_view column) {
  auto split = [](std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
      const std::size_t comma = line.find(',', start);
      out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return out;
  };
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < csv.size()) {
    std::size_t end = csv.find('\n', start);
    if (end == std::string_view::npos) end = csv.size();
    std::string_view line = csv.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.empty()) throw Error(ErrorCode::validation, "empty CSV");
  const auto header = split(lines.front());
  const auto n_it = std::find(header.begin(), header.end(), "n");
  const auto c_it = std::find(header.begin(), header.end(), column);
  if (n_it == header.end()) throw Error(ErrorCode::validation, "CSV has no n column");
  if (c_it == header.end()) throw Error(ErrorCode::validation, "CSV has no " + std::string(column) + " column");
  const std::size_t ni = static_cast<std::size_t>(n_it - header.begin());
  const std::size_t ci = static_cast<std::size_t>(c_it - header.begin());
  std::vector<std::pair<std::uint64_t, double>> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split(lines[i]);
    if (f.size() != header.size()) {
      throw Error(ErrorCode::validation, "CSV line " + std::to_string(i + 1) + " has the wrong number of fields");
    }
    if (f[ci].empty() || f[ci].starts_with("ERROR:")) continue;
    try {
      out.emplace_back(std::stoull(std::string(f[ni])), std::stod(std::string(f[ci])));
    } catch (const std::exception&) {
      throw Error(ErrorCode::validation, "CSV line " + std::to_string(i + 1) + " is not numeric");
    }
  }
  return out;
}

}  // namespace fstein
