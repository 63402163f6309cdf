#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "fstein/distance.hpp"
#include "fstein/error.hpp"
#include "fstein/fstein.h"
#include "fstein/karamata.hpp"
#include "fstein/solver.hpp"
#include "fstein/stein.hpp"
#include "fstein/sweep.hpp"

struct fs_law {
  std::shared_ptr<const fstein::Law> law;
};

struct fs_text {
  std::string data;
};

namespace {

using namespace fstein;

thread_local std::string g_last_error;

template <class F>
fs_status guard(F&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return FS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return static_cast<fs_status>(static_cast<int>(e.code()));
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return FS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return FS_ERR_INTERNAL;
  }
}

template <class T>
T* need(T* p, const char* what) {
  if (!p) throw Error(ErrorCode::invalid_parameter, std::string("null argument: ") + what);
  return p;
}

const Law& law_of(const fs_law* h, const char* what) { return *need(h, what)->law; }

QuadratureConfig config(const fs_config* cfg) {
  QuadratureConfig q;
  if (cfg) {
    q.abs_tol = cfg->abs_tol;
    q.rel_tol = cfg->rel_tol;
    q.max_subdivisions = cfg->max_subdivisions;
    q.probe_points = cfg->probe_points;
  }
  q.validate();
  return q;
}

ScalingMode scaling(int s) {
  switch (s) {
    case FS_SCALING_TABLE: return ScalingMode::table;
    case FS_SCALING_INVERSE: return ScalingMode::inverse;
  }
  throw Error(ErrorCode::invalid_parameter, "unknown scaling mode " + std::to_string(s));
}

RoleMode roles(int r) {
  switch (r) {
    case FS_ROLES_AUTOMATIC: return RoleMode::automatic;
    case FS_ROLES_MAXIMA_REFERENCE: return RoleMode::maxima_reference;
    case FS_ROLES_FRECHET_REFERENCE: return RoleMode::frechet_reference;
  }
  throw Error(ErrorCode::invalid_parameter, "unknown role mode " + std::to_string(r));
}

FrechetOptions options(const fs_frechet_options* o) {
  fs_frechet_options d;
  fs_frechet_options_default(&d);
  if (!o) o = &d;
  FrechetOptions f;
  if (o->alpha > 0.0) f.alpha = o->alpha;
  if (o->a_n > 0.0) f.a_n = o->a_n;
  f.scaling = scaling(o->scaling);
  f.roles = roles(o->roles);
  f.unsafe_weighted = o->unsafe_weighted != 0;
  return f;
}

void emit(fs_text** out, std::string s) {
  if (out) *out = new fs_text{std::move(s)};
}

std::string join(const std::vector<std::string>& lines) {
  std::string s;
  for (const auto& l : lines) {
    s += l;
    s += '\n';
  }
  return s;
}

void fill(fs_discrepancy* out, const DiscrepancyResult& r) {
  out->value = r.value;
  out->error_estimate = r.error_estimate;
  out->subdivisions = r.subdivisions;
  out->kink_count = r.kinks.size();
  const std::size_t m = std::min<std::size_t>(r.kinks.size(), FS_MAX_KINKS);
  for (std::size_t i = 0; i < m; ++i) out->kinks[i] = r.kinks[i];
}

void fill(fs_bounds* out, const BoundReport& b) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out->delta = b.delta;
  out->delta_err = b.delta_err;
  out->has_delta_w = b.delta_w.has_value();
  out->delta_w = b.delta_w.value_or(nan);
  out->delta_w_err = b.delta_w_err;
  out->q0 = b.q0;
  out->has_mu = b.mu.has_value();
  out->mu = b.mu.value_or(nan);
  out->kol_bound = b.kol_bound;
  out->tv_bound = b.tv_bound;
  out->has_wass_bound = b.wass_bound.has_value();
  out->wass_bound = b.wass_bound.value_or(nan);
  out->kol_err = b.kol_err;
  out->tv_err = b.tv_err;
  out->wass_err = b.wass_err;
}

fs_distance distance(const std::optional<DistanceValue>& d) {
  if (!d) return {0, std::numeric_limits<double>::quiet_NaN(), 0.0};
  return {1, d->value, d->error};
}

void fill(fs_oracle* out, const OracleReport& r) {
  out->kol = distance(r.kol);
  out->tv = distance(r.tv);
  out->wass = distance(r.wass);
  out->kol_location = r.kol_location;
  out->monte_carlo = r.method == OracleReport::Method::monte_carlo;
  out->samples = r.samples.value_or(0);
}

}  // namespace

extern "C" {

const char* fs_last_error(void) { return g_last_error.c_str(); }

const char* fs_status_name(fs_status status) {
  if (status == FS_OK) return "ok";
  if (status == FS_ERR_INTERNAL) return "internal";
  if (status >= FS_ERR_DOMAIN && status <= FS_ERR_IO) {
    return to_string(static_cast<ErrorCode>(static_cast<int>(status))).data();
  }
  return "unknown";
}

const char* fs_version(void) { return "0.1.0"; }

void fs_config_default(fs_config* cfg) {
  if (!cfg) return;
  const QuadratureConfig q;
  cfg->abs_tol = q.abs_tol;
  cfg->rel_tol = q.rel_tol;
  cfg->max_subdivisions = q.max_subdivisions;
  cfg->probe_points = q.probe_points;
}

void fs_frechet_options_default(fs_frechet_options* opts) {
  if (!opts) return;
  opts->alpha = 0.0;
  opts->a_n = 0.0;
  opts->scaling = FS_SCALING_TABLE;
  opts->roles = FS_ROLES_AUTOMATIC;
  opts->unsafe_weighted = 0;
}

void fs_sweep_options_default(fs_sweep_options* opts) {
  if (!opts) return;
  opts->alpha = 0.0;
  opts->weighted = 1;
  opts->with_oracle = 0;
  opts->scaling = FS_SCALING_TABLE;
  opts->roles = FS_ROLES_AUTOMATIC;
  opts->threads = 0;
}

const char* fs_text_data(const fs_text* text) { return text ? text->data.c_str() : ""; }
size_t fs_text_size(const fs_text* text) { return text ? text->data.size() : 0; }
void fs_text_free(fs_text* text) { delete text; }

fs_status fs_law_catalog(const char* name, const char* const* keys, const char* const* values, size_t count,
                         fs_law** out) {
  return guard([&] {
    need(out, "out");
    ParamList params;
    for (size_t i = 0; i < count; ++i) {
      params[need(keys, "keys")[i]] = need(values, "values")[i];
    }
    *out = new fs_law{catalog(need(name, "name"), params)};
  });
}

fs_status fs_law_frechet(double alpha, fs_law** out) {
  return guard([&] { *need(out, "out") = new fs_law{std::make_shared<FrechetLaw>(alpha)}; });
}

fs_status fs_law_maxima(const fs_law* base, uint64_t n, double a_n, int mode, fs_law** out) {
  return guard([&] {
    need(out, "out");
    std::optional<double> a;
    if (a_n > 0.0) a = a_n;
    *out = new fs_law{maxima(need(base, "base")->law, n, a, scaling(mode))};
  });
}

void fs_law_free(fs_law* law) { delete law; }

fs_status fs_law_label(const fs_law* law, fs_text** out) {
  return guard([&] { emit(need(out, "out"), law_of(law, "law").label()); });
}

fs_status fs_law_eval(const fs_law* law, double x, fs_law_values* out) {
  return guard([&] {
    const Law& L = law_of(law, "law");
    need(out, "out");
    out->cdf = L.cdf(x);
    out->pdf = L.pdf(x);
    out->survival = L.survival(x);
    out->reverse_hazard = L.reverse_hazard(x);
  });
}

fs_status fs_law_quantile(const fs_law* law, double u, double* out) {
  return guard([&] { *need(out, "out") = law_of(law, "law").quantile(u); });
}

fs_status fs_law_info_get(const fs_law* law, const fs_config* cfg, fs_law_info* out) {
  return guard([&] {
    const Law& L = law_of(law, "law");
    need(out, "out");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out->left_endpoint = L.left_endpoint();
    out->starting_mass = L.starting_mass();
    const auto a = L.tail_index();
    out->has_tail_index = a.has_value();
    out->tail_index = a.value_or(nan);
    out->has_mean = has_finite_mean(L);
    out->mean = out->has_mean ? mean(L, config(cfg)) : nan;
  });
}

fs_status fs_law_rate(const fs_law* law, uint64_t n, double* out) {
  return guard([&] {
    const auto d = std::dynamic_pointer_cast<const Distribution>(need(law, "law")->law);
    std::optional<double> r = d ? d->rate(n) : std::nullopt;
    if (!r) throw Error(ErrorCode::invalid_parameter, "law has no catalog rate");
    *need(out, "out") = *r;
  });
}

fs_status fs_scaling_sequence(const fs_law* law, uint64_t n, int mode, double* out) {
  return guard([&] { *need(out, "out") = scaling_sequence(law_of(law, "law"), n, scaling(mode)); });
}

fs_status fs_catalog_help(fs_text** out) {
  return guard([&] { emit(need(out, "out"), catalog_help()); });
}

fs_status fs_delta(const fs_law* P, const fs_law* Q, int weighted, const fs_config* cfg, fs_discrepancy* out) {
  return guard([&] {
    need(out, "out");
    const auto q = config(cfg);
    const Law& p = law_of(P, "P");
    const Law& qq = law_of(Q, "Q");
    fill(out, weighted ? delta_w(p, qq, q) : delta(p, qq, q));
    out->maxima_is_reference = 0;
  });
}

fs_status fs_frechet_delta(const fs_law* F, uint64_t n, int weighted, const fs_frechet_options* opts,
                           const fs_config* cfg, fs_discrepancy* out, fs_text** warnings) {
  return guard([&] {
    need(out, "out");
    const FrechetOptions o = options(opts);
    const auto pair = frechet_pair(need(F, "F")->law, n, o);
    const DiscrepancyResult r = frechet_delta(F->law, n, weighted != 0, o, config(cfg));
    fill(out, r);
    out->maxima_is_reference = pair.maxima_is_reference;
    emit(warnings, join(r.warnings));
  });
}

fs_status fs_bounds_compute(const fs_law* P, const fs_law* Q, const fs_config* cfg, fs_bounds* out, fs_text** notes) {
  return guard([&] {
    need(out, "out");
    const BoundReport b = bounds(law_of(P, "P"), law_of(Q, "Q"), config(cfg));
    fill(out, b);
    emit(notes, join(b.notes));
  });
}

fs_status fs_frechet_bounds(const fs_law* F, uint64_t n, const fs_frechet_options* opts, const fs_config* cfg,
                            fs_bounds* out, fs_text** notes) {
  return guard([&] {
    need(out, "out");
    const BoundReport b = frechet_bounds(need(F, "F")->law, n, options(opts), config(cfg));
    fill(out, b);
    emit(notes, join(b.notes));
  });
}

fs_status fs_frechet_vs_frechet(double alpha, double beta, int weighted, double* out) {
  return guard([&] { *need(out, "out") = frechet_vs_frechet(alpha, beta, weighted != 0); });
}

fs_status fs_pareto_delta(uint64_t n, double* out) {
  return guard([&] { *need(out, "out") = pareto_delta(n); });
}

fs_status fs_pareto_delta_w(double alpha, uint64_t n, double* out) {
  return guard([&] { *need(out, "out") = pareto_delta_w(alpha, n); });
}

fs_status fs_u_n(const fs_law* F, uint64_t n, int mode, double* out) {
  return guard([&] { *need(out, "out") = u_n_diagnostic(law_of(F, "F"), n, scaling(mode)); });
}

fs_status fs_exact_oracle(const fs_law* P, const fs_law* Q, const fs_config* cfg, fs_oracle* out) {
  return guard([&] {
    need(out, "out");
    fill(out, exact_oracle(law_of(P, "P"), law_of(Q, "Q"), config(cfg)));
  });
}

fs_status fs_frechet_oracle(const fs_law* F, uint64_t n, const fs_frechet_options* opts, const fs_config* cfg,
                            fs_oracle* out) {
  return guard([&] {
    need(out, "out");
    const auto pair = frechet_pair(need(F, "F")->law, n, options(opts));
    fill(out, exact_oracle(*pair.P, *pair.Q, config(cfg)));
  });
}

fs_status fs_monte_carlo(const fs_law* F, uint64_t n, const fs_frechet_options* opts, uint64_t samples, uint64_t seed,
                         fs_oracle* out) {
  return guard([&] {
    need(out, "out");
    const FrechetOptions o = options(opts);
    const auto& law = need(F, "F")->law;
    const std::optional<double> alpha = o.alpha ? o.alpha : law->tail_index();
    if (!alpha) throw Error(ErrorCode::invalid_parameter, law->label() + " has no tail index; pass alpha");
    fill(out, monte_carlo_distances(law, n, *alpha, samples, seed, o.a_n, o.scaling));
  });
}

fs_status fs_verify_proposition1(const fs_law* P, int grid_size, const fs_config* cfg, int* passed, fs_text** report) {
  return guard([&] {
    const Proposition1Report r = verify_proposition1(need(P, "P")->law, grid_size, config(cfg));
    if (passed) *passed = r.passed();
    emit(report, r.to_text());
  });
}

fs_status fs_rv_report(const fs_law* F, double t_max, int mode, fs_text** csv, double* estimated_index) {
  return guard([&] {
    RVOptions o;
    if (t_max > 0.0) o.t_max = t_max;
    o.scaling = scaling(mode);
    const RVReport r = rv_report(law_of(F, "F"), o);
    if (estimated_index) *estimated_index = r.estimated_index;
    emit(csv, r.to_csv());
  });
}

fs_status fs_reverse_hazard_index(const fs_law* F, double t_max, double* out) {
  return guard([&] {
    const Law& L = law_of(F, "F");
    need(out, "out");
    const auto t = default_t_grid(t_max);
    std::vector<double> x;
    const double floor = std::max(1.0, 2.0 * L.left_endpoint());
    for (double v : default_x_grid()) {
      if (t.front() * v >= floor) x.push_back(v);
    }
    *out = estimate_index([&](double s) { return L.reverse_hazard(s); }, t, x);
  });
}

fs_status fs_da_check(const fs_law* F, const uint64_t* n, size_t count, int mode, double* out) {
  return guard([&] {
    const auto r = da_check(law_of(F, "F"), std::span<const std::uint64_t>(need(n, "n"), count), scaling(mode));
    need(out, "out");
    for (size_t i = 0; i < r.size(); ++i) out[i] = r[i].second;
  });
}

fs_status fs_karamata_limit(const fs_law* F, const double* t, size_t count, double* out, size_t* written) {
  return guard([&] {
    const auto r = karamata_limit(law_of(F, "F"), std::span<const double>(need(t, "t"), count));
    need(out, "out");
    for (size_t i = 0; i < r.size(); ++i) out[i] = r[i];
    if (written) *written = r.size();
  });
}

fs_status fs_sweep(const fs_law* F, const uint64_t* n, size_t count, const fs_sweep_options* opts, const fs_config* cfg,
                   fs_text** csv, fs_text** svg) {
  return guard([&] {
    fs_sweep_options d;
    fs_sweep_options_default(&d);
    if (!opts) opts = &d;
    SweepSpec spec;
    spec.dist = need(F, "F")->law;
    if (opts->alpha > 0.0) spec.alpha = opts->alpha;
    if (count > 0) spec.n_values.assign(need(n, "n"), n + count);
    spec.weighted = opts->weighted != 0;
    spec.with_oracle = opts->with_oracle != 0;
    spec.scaling = scaling(opts->scaling);
    spec.roles = roles(opts->roles);
    spec.threads = opts->threads;
    const SweepResult r = run_sweep(spec, config(cfg));
    emit(csv, r.to_csv());
    emit(svg, r.to_svg());
  });
}

fs_status fs_fit_rate(const uint64_t* n, const double* values, size_t count, fs_rate_fit* out) {
  return guard([&] {
    std::vector<std::pair<std::uint64_t, double>> series;
    for (size_t i = 0; i < count; ++i) series.emplace_back(need(n, "n")[i], need(values, "values")[i]);
    const RateFit f = fit_rate(series);
    need(out, "out");
    out->slope = f.slope;
    out->intercept = f.intercept;
    out->r_squared = f.r_squared;
  });
}

fs_status fs_sweep_column(const char* csv, const char* column, uint64_t* n, double* values, size_t capacity,
                          size_t* count) {
  return guard([&] {
    const auto pairs = read_sweep_column(need(csv, "csv"), need(column, "column"));
    *need(count, "count") = pairs.size();
    const size_t m = std::min(capacity, pairs.size());
    for (size_t i = 0; i < m; ++i) {
      need(n, "n")[i] = pairs[i].first;
      need(values, "values")[i] = pairs[i].second;
    }
  });
}

fs_status fs_frechet_compare(double alpha, double beta, const fs_config* cfg, fs_text** report) {
  return guard([&] { emit(need(report, "report"), frechet_compare(alpha, beta, config(cfg)).to_text()); });
}

}  // extern "C"
