// fstein: command-line front end over the C interface.
//
// Exit codes: 0 success, 2 validation error, 3 computation error, 4 I/O error.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fstein/fstein.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitComputation = 3;
constexpr int kExitIo = 4;

struct Failure {
  int exit_code;
  std::string message;
};

int exit_code_for(fs_status s) {
  switch (s) {
    case FS_OK: return kExitOk;
    case FS_ERR_DOMAIN:
    case FS_ERR_INVALID_PARAMETER:
    case FS_ERR_UNKNOWN_DISTRIBUTION:
    case FS_ERR_PRECONDITION:
    case FS_ERR_NONEXISTENT_MEAN:
    case FS_ERR_VALIDATION: return kExitValidation;
    case FS_ERR_IO: return kExitIo;
    default: return kExitComputation;
  }
}

void check(fs_status s) {
  if (s != FS_OK) throw Failure{exit_code_for(s), std::string(fs_status_name(s)) + ": " + fs_last_error()};
}

[[noreturn]] void invalid(const std::string& msg) { throw Failure{kExitValidation, msg}; }

struct LawDeleter {
  void operator()(fs_law* l) const { fs_law_free(l); }
};
struct TextDeleter {
  void operator()(fs_text* t) const { fs_text_free(t); }
};
using Law = std::unique_ptr<fs_law, LawDeleter>;
using Text = std::unique_ptr<fs_text, TextDeleter>;

std::string take(fs_text* t) {
  Text owned(t);
  return owned ? std::string(fs_text_data(owned.get()), fs_text_size(owned.get())) : std::string();
}

std::string g17(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double parse_real(const std::string& s, const std::string& whole) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    invalid("bad integer '" + whole + "'");
  }
  if (used != s.size()) invalid("bad integer '" + whole + "'");
  return v;
}

// "1000", "1e3" and "10^3" all give 1000
std::uint64_t parse_count(const std::string& text) {
  const auto caret = text.find('^');
  const double v = caret == std::string::npos
                       ? parse_real(text, text)
                       : std::pow(parse_real(text.substr(0, caret), text), parse_real(text.substr(caret + 1), text));
  if (!(v >= 1.0) || v > 1.8e19 || std::floor(v) != v) invalid("'" + text + "' is not a positive integer");
  return static_cast<std::uint64_t>(std::llround(v));
}

struct Global {
  std::optional<double> tol;
  int max_subdiv = 0;
  std::string output;
  std::uint64_t seed = 1;

  fs_config config() const {
    fs_config c;
    fs_config_default(&c);
    if (tol) {
      if (!(*tol > 0.0)) invalid("--tol must be positive");
      c.rel_tol = *tol;
      c.abs_tol = std::min(c.abs_tol, *tol);
    }
    if (max_subdiv != 0) {
      if (max_subdiv < 1) invalid("--max-subdiv must be at least 1");
      c.max_subdivisions = max_subdiv;
    }
    return c;
  }

  void emit(const std::string& text) const {
    if (output.empty() || output == "-") {
      std::cout << text;
      std::cout.flush();
      if (!std::cout) throw Failure{kExitIo, "write to standard output failed"};
      return;
    }
    write_file(output, text);
  }

  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Failure{kExitIo, "cannot open " + path + " for writing"};
    f << text;
    f.close();
    if (!f) throw Failure{kExitIo, "write to " + path + " failed"};
  }
};

// --dist / --param selection shared by most subcommands
struct LawArgs {
  std::string dist;
  std::vector<std::string> params;

  void add(CLI::App* app, bool required = true) {
    auto* o = app->add_option("--dist", dist, "catalog distribution (see --list)");
    if (required) o->required();
    app->add_option("--param", params, "distribution parameter key=value (repeatable)");
  }

  Law make() const {
    std::vector<std::string> keys, values;
    for (const auto& p : params) {
      const auto eq = p.find('=');
      if (eq == std::string::npos || eq == 0) invalid("--param expects key=value, got '" + p + "'");
      keys.push_back(p.substr(0, eq));
      values.push_back(p.substr(eq + 1));
    }
    std::vector<const char*> k, v;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      k.push_back(keys[i].c_str());
      v.push_back(values[i].c_str());
    }
    fs_law* out = nullptr;
    check(fs_law_catalog(dist.c_str(), k.data(), v.data(), k.size(), &out));
    return Law(out);
  }
};

// --alpha / --a-n / --scaling / --roles / --unsafe-weighted
struct PairArgs {
  double alpha = 0.0;
  double a_n = 0.0;
  std::string scaling = "table";
  std::string roles = "auto";
  bool unsafe_weighted = false;

  void add(CLI::App* app) {
    app->add_option("--alpha", alpha, "Frechet index (default: the law's tail index)");
    app->add_option("--a-n", a_n, "normalizing constant a_n (default: from --scaling)");
    app->add_option("--scaling", scaling, "a_n source: table or inverse")->check(CLI::IsMember({"table", "inverse"}));
    app->add_option("--roles", roles, "reference law: auto, maxima or frechet")
        ->check(CLI::IsMember({"auto", "maxima", "frechet"}));
    app->add_flag("--unsafe-weighted", unsafe_weighted, "allow the weighted discrepancy when c_F < 0");
  }

  int scaling_mode() const { return scaling == "inverse" ? FS_SCALING_INVERSE : FS_SCALING_TABLE; }

  fs_frechet_options options() const {
    fs_frechet_options o;
    fs_frechet_options_default(&o);
    o.alpha = alpha;
    o.a_n = a_n;
    o.scaling = scaling_mode();
    o.roles = roles == "maxima" ? FS_ROLES_MAXIMA_REFERENCE : roles == "frechet" ? FS_ROLES_FRECHET_REFERENCE
                                                                                 : FS_ROLES_AUTOMATIC;
    o.unsafe_weighted = unsafe_weighted;
    return o;
  }
};

std::vector<std::uint64_t> parse_counts(const std::vector<std::string>& raw) {
  std::vector<std::uint64_t> out;
  for (const auto& r : raw) out.push_back(parse_count(r));
  return out;
}

void print_notes(const std::string& notes) {
  std::istringstream in(notes);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) std::cerr << "note: " << line << "\n";
  }
}

std::string distance_cells(const fs_distance& d) {
  return d.available ? g17(d.value) + "," + g17(d.error) : std::string(",");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein discrepancies between maxima of heavy-tailed samples and Frechet laws"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Global g;
  app.add_option("--tol", g.tol, "relative quadrature tolerance");
  app.add_option("--max-subdiv", g.max_subdiv, "quadrature subdivision budget");
  app.add_option("--output", g.output, "output file (default: standard output)");
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  bool list = false;
  app.add_flag("--list", list, "list the catalog distributions and their parameters");

  // discrepancy
  auto* disc = app.add_subcommand("discrepancy", "Delta or Delta_w between F_n and Phi_alpha");
  LawArgs disc_law;
  PairArgs disc_pair;
  std::string disc_n;
  bool disc_weighted = false;
  disc_law.add(disc);
  disc_pair.add(disc);
  disc->add_option("--n", disc_n, "sample size")->required();
  disc->add_flag("--weighted", disc_weighted, "weighted discrepancy Delta_w");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "Kolmogorov, TV and Wasserstein bounds");
  LawArgs bnd_law;
  PairArgs bnd_pair;
  std::string bnd_n;
  bool bnd_oracle = false;
  bnd_law.add(bnd);
  bnd_pair.add(bnd);
  bnd->add_option("--n", bnd_n, "sample size")->required();
  bnd->add_flag("--oracle", bnd_oracle, "append exact distances");

  // oracle
  auto* orc = app.add_subcommand("oracle", "exact or Monte Carlo distances between F_n and Phi_alpha");
  LawArgs orc_law;
  PairArgs orc_pair;
  std::string orc_n;
  bool orc_mc = false;
  std::string orc_samples = "1000000";
  orc_law.add(orc);
  orc_pair.add(orc);
  orc->add_option("--n", orc_n, "sample size")->required();
  orc->add_flag("--mc", orc_mc, "Monte Carlo instead of exact integration");
  orc->add_option("--samples", orc_samples, "Monte Carlo sample count (at least 1000)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "discrepancies and bounds over a list of n");
  LawArgs swp_law;
  PairArgs swp_pair;
  std::vector<std::string> swp_n;
  bool swp_weighted = false;
  bool swp_oracle = false;
  std::string swp_svg;
  int swp_threads = 0;
  swp_law.add(swp);
  swp->add_option("--alpha", swp_pair.alpha, "Frechet index (default: the law's tail index)");
  swp->add_option("--scaling", swp_pair.scaling, "a_n source: table or inverse")
      ->check(CLI::IsMember({"table", "inverse"}));
  swp->add_option("--roles", swp_pair.roles, "reference law: auto, maxima or frechet")
      ->check(CLI::IsMember({"auto", "maxima", "frechet"}));
  swp->add_option("--n", swp_n, "sample sizes, strictly increasing")->required()->delimiter(',');
  swp->add_flag("--weighted", swp_weighted, "include Delta_w and the Wasserstein bound");
  swp->add_flag("--oracle", swp_oracle, "include exact distances");
  swp->add_option("--svg", swp_svg, "also write a log-log plot of delta");
  swp->add_option("--threads", swp_threads, "worker threads (0: all cores)");

  // rv-check
  auto* rv = app.add_subcommand("rv-check", "regular-variation diagnostics as CSV sections");
  LawArgs rv_law;
  double rv_tmax = 1e6;
  std::string rv_scaling = "table";
  rv_law.add(rv);
  rv->add_option("--t-max", rv_tmax, "largest t probed");
  rv->add_option("--scaling", rv_scaling, "a_n source: table or inverse")->check(CLI::IsMember({"table", "inverse"}));

  // stein-verify
  auto* sv = app.add_subcommand("stein-verify", "check the Stein-solution bounds on a quantile grid");
  LawArgs sv_law;
  int sv_grid = 1000;
  sv_law.add(sv);
  sv->add_option("--grid-size", sv_grid, "grid points");

  // frechet-compare
  auto* fc = app.add_subcommand("frechet-compare", "Delta(Phi_alpha | Phi_beta) closed form against quadrature");
  double fc_alpha = 0.0, fc_beta = 0.0;
  fc->add_option("--alpha", fc_alpha, "integrating index")->required();
  fc->add_option("--beta", fc_beta, "reference index, beta > alpha")->required();

  // rate-fit
  auto* rf = app.add_subcommand("rate-fit", "log-log slope of a sweep column");
  std::string rf_input;
  std::string rf_column = "delta";
  LawArgs rf_law;
  PairArgs rf_pair;
  std::vector<std::string> rf_n;
  rf->add_option("--input", rf_input, "sweep CSV to read");
  rf->add_option("--column", rf_column, "column to fit");
  rf_law.add(rf, false);
  rf->add_option("--scaling", rf_pair.scaling, "a_n source when sweeping: table or inverse")
      ->check(CLI::IsMember({"table", "inverse"}));
  rf->add_option("--n", rf_n, "sample sizes to sweep when no --input is given")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (list) {
      fs_text* t = nullptr;
      check(fs_catalog_help(&t));
      g.emit(take(t));
      return kExitOk;
    }
    if (app.get_subcommands().empty()) {
      std::cerr << app.help();
      return kExitValidation;
    }
    const fs_config cfg = g.config();

    if (*disc) {
      Law F = disc_law.make();
      const auto n = parse_count(disc_n);
      const fs_frechet_options o = disc_pair.options();
      fs_discrepancy d{};
      fs_text* warn = nullptr;
      check(fs_frechet_delta(F.get(), n, disc_weighted, &o, &cfg, &d, &warn));
      print_notes(take(warn));
      fs_text* label = nullptr;
      check(fs_law_label(F.get(), &label));
      std::string kinks;
      for (std::size_t i = 0; i < std::min<std::size_t>(d.kink_count, FS_MAX_KINKS); ++i) {
        kinks += (i ? " " : "") + g17(d.kinks[i]);
      }
      std::string out = "dist,n,weighted,reference,value,error_estimate,subdivisions,kinks\n";
      out += quote(take(label)) + "," + std::to_string(n) + "," + (disc_weighted ? "1" : "0") + "," +
             (d.maxima_is_reference ? "F_n" : "Phi_alpha") + "," + g17(d.value) + "," + g17(d.error_estimate) + "," +
             std::to_string(d.subdivisions) + "," + kinks + "\n";
      g.emit(out);
    } else if (*bnd) {
      Law F = bnd_law.make();
      const auto n = parse_count(bnd_n);
      const fs_frechet_options o = bnd_pair.options();
      fs_bounds b{};
      fs_text* notes = nullptr;
      check(fs_frechet_bounds(F.get(), n, &o, &cfg, &b, &notes));
      print_notes(take(notes));
      std::string head = "n,delta,delta_err,delta_w,delta_w_err,q0,mu,kol_bound,tv_bound,wass_bound,kol_err,tv_err,wass_err";
      std::string row = std::to_string(n) + "," + g17(b.delta) + "," + g17(b.delta_err) + "," +
                        (b.has_delta_w ? g17(b.delta_w) + "," + g17(b.delta_w_err) : std::string(",")) + "," +
                        g17(b.q0) + "," + (b.has_mu ? g17(b.mu) : "") + "," + g17(b.kol_bound) + "," +
                        g17(b.tv_bound) + "," + (b.has_wass_bound ? g17(b.wass_bound) : "") + "," + g17(b.kol_err) +
                        "," + g17(b.tv_err) + "," + (b.has_wass_bound ? g17(b.wass_err) : "");
      if (bnd_oracle) {
        fs_oracle orc{};
        check(fs_frechet_oracle(F.get(), n, &o, &cfg, &orc));
        head += ",kol_oracle,tv_oracle,wass_oracle";
        row += "," + g17(orc.kol.value) + "," + g17(orc.tv.value) + "," + (orc.wass.available ? g17(orc.wass.value) : "");
      }
      g.emit(head + "\n" + row + "\n");
    } else if (*orc) {
      Law F = orc_law.make();
      const auto n = parse_count(orc_n);
      const fs_frechet_options o = orc_pair.options();
      fs_oracle r{};
      if (orc_mc) {
        check(fs_monte_carlo(F.get(), n, &o, parse_count(orc_samples), g.seed, &r));
      } else {
        check(fs_frechet_oracle(F.get(), n, &o, &cfg, &r));
      }
      std::string out = "method,n,samples,seed,kol,kol_err,tv,tv_err,wass,wass_err,kol_location\n";
      out += std::string(r.monte_carlo ? "monte_carlo" : "exact") + "," + std::to_string(n) + "," +
             (r.monte_carlo ? std::to_string(r.samples) : "") + "," + (r.monte_carlo ? std::to_string(g.seed) : "") +
             "," + distance_cells(r.kol) + "," + distance_cells(r.tv) + "," + distance_cells(r.wass) + "," +
             g17(r.kol_location) + "\n";
      g.emit(out);
    } else if (*swp) {
      Law F = swp_law.make();
      const auto ns = parse_counts(swp_n);
      fs_sweep_options so;
      fs_sweep_options_default(&so);
      so.alpha = swp_pair.alpha;
      so.weighted = swp_weighted;
      so.with_oracle = swp_oracle;
      so.scaling = swp_pair.scaling_mode();
      so.roles = swp_pair.options().roles;
      so.threads = swp_threads;
      fs_text* csv = nullptr;
      fs_text* svg = nullptr;
      check(fs_sweep(F.get(), ns.data(), ns.size(), &so, &cfg, &csv, swp_svg.empty() ? nullptr : &svg));
      const std::string csv_text = take(csv);
      const std::string svg_text = take(svg);
      g.emit(csv_text);
      if (!swp_svg.empty()) Global::write_file(swp_svg, svg_text);
    } else if (*rv) {
      Law F = rv_law.make();
      fs_text* csv = nullptr;
      check(fs_rv_report(F.get(), rv_tmax, rv_scaling == "inverse" ? FS_SCALING_INVERSE : FS_SCALING_TABLE, &csv,
                         nullptr));
      g.emit(take(csv));
    } else if (*sv) {
      Law P = sv_law.make();
      int passed = 0;
      fs_text* report = nullptr;
      check(fs_verify_proposition1(P.get(), sv_grid, &cfg, &passed, &report));
      g.emit(take(report));
    } else if (*fc) {
      fs_text* report = nullptr;
      check(fs_frechet_compare(fc_alpha, fc_beta, &cfg, &report));
      g.emit(take(report));
    } else if (*rf) {
      std::string csv;
      Law F;
      if (!rf_law.dist.empty()) F = rf_law.make();
      if (!rf_input.empty()) {
        std::ifstream in(rf_input, std::ios::binary);
        if (!in) throw Failure{kExitIo, "cannot open " + rf_input};
        std::ostringstream ss;
        ss << in.rdbuf();
        csv = ss.str();
      } else {
        if (!F || rf_n.empty()) invalid("rate-fit needs --input, or --dist with --n");
        const auto ns = parse_counts(rf_n);
        fs_sweep_options so;
        fs_sweep_options_default(&so);
        so.weighted = 0;
        so.scaling = rf_pair.scaling_mode();
        fs_text* t = nullptr;
        check(fs_sweep(F.get(), ns.data(), ns.size(), &so, &cfg, &t, nullptr));
        csv = take(t);
      }
      std::size_t count = 0;
      check(fs_sweep_column(csv.c_str(), rf_column.c_str(), nullptr, nullptr, 0, &count));
      std::vector<std::uint64_t> ns(count);
      std::vector<double> vs(count);
      check(fs_sweep_column(csv.c_str(), rf_column.c_str(), ns.data(), vs.data(), count, &count));
      fs_rate_fit fit{};
      check(fs_fit_rate(ns.data(), vs.data(), count, &fit));
      std::string out = "# fit\ncolumn,points,slope,intercept,r_squared\n";
      out += rf_column + "," + std::to_string(count) + "," + g17(fit.slope) + "," + g17(fit.intercept) + "," +
             g17(fit.r_squared) + "\n";
      if (F) {
        out += "\n# scaled_limits\nn,c_n,scaled\n";
        for (std::size_t i = 0; i < count; ++i) {
          double c = 0.0;
          if (fs_law_rate(F.get(), ns[i], &c) != FS_OK) break;
          out += std::to_string(ns[i]) + "," + g17(c) + "," + g17(c * vs[i]) + "\n";
        }
      }
      g.emit(out);
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }
  return kExitOk;
}
