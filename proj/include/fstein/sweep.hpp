#pragma once

// n-sweeps of the Frechet discrepancies with optional exact distances,
// log-log rate fits, and the Frechet-vs-Frechet comparison report.

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fstein/error.hpp"
#include "fstein/law.hpp"
#include "fstein/quadrature.hpp"
#include "fstein/stein.hpp"

namespace fstein {

struct SweepSpec {
  std::shared_ptr<const Law> dist;
  std::optional<double> alpha;  // tail index override
  std::vector<std::uint64_t> n_values;
  bool weighted = true;      // compute delta_w and the Wasserstein bound
  bool with_oracle = false;  // exact Kol / TV / Wass columns
  std::string output_path;   // used by the front end; run_sweep writes nothing
  ScalingMode scaling = ScalingMode::table;
  RoleMode roles = RoleMode::automatic;
  int threads = 0;  // 0: hardware concurrency

  /// Error(validation) unless dist is set and n_values is non-empty,
  /// positive and strictly increasing.
  void validate() const;
};

struct SweepCell {
  std::optional<double> value;
  std::optional<ErrorCode> error;

  /// %.17g, "ERROR:<code>", or empty.
  std::string text() const;
};

struct SweepRow {
  static constexpr std::size_t kColumns = 10;
  std::uint64_t n = 0;
  std::array<SweepCell, kColumns> cells;  // in the order of sweep_columns() after "n"
  std::vector<std::string> notes;

  const SweepCell& delta() const { return cells[0]; }
};

/// "n" followed by the ten value columns.
const std::array<std::string_view, SweepRow::kColumns + 1>& sweep_columns();

struct SweepResult {
  std::string law;
  std::vector<SweepRow> rows;  // in n order

  std::string to_csv() const;
  /// Log-log line plot of the delta column as standalone SVG markup.
  std::string to_svg() const;
};

/// Rows are computed concurrently and returned in n order. A failure inside
/// a row is recorded in the affected cells and never aborts the sweep.
SweepResult run_sweep(const SweepSpec& spec, const QuadratureConfig& cfg = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<std::uint64_t, double>> scaled_limits;  // (n, c_n value)
};

/// Least squares of log value on log n. Needs at least three points with
/// positive values (Error(validation) otherwise). `rate` supplies c_n.
RateFit fit_rate(const std::vector<std::pair<std::uint64_t, double>>& series,
                 const std::function<std::optional<double>(std::uint64_t)>& rate = {});

struct FrechetCompareReport {
  double alpha = 0.0;
  double beta = 0.0;
  double delta_closed = 0.0;
  double delta_quadrature = 0.0;
  double delta_error = 0.0;
  std::optional<double> delta_w_closed;
  std::optional<double> delta_w_quadrature;
  double delta_w_error = 0.0;
  double kol_bound = 0.0;
  double tv_bound = 0.0;
  std::optional<double> wass_bound;
  double kol = 0.0;  // exact distances for reference
  double tv = 0.0;
  std::optional<double> wass;
  std::vector<std::string> notes;

  std::string to_text() const;
};

/// Delta(Phi_alpha | Phi_beta) and Delta_w (alpha > 1) in closed form and by
/// quadrature, with the bounds they give. Error(precondition) unless beta > alpha > 0.
FrechetCompareReport frechet_compare(double alpha, double beta, const QuadratureConfig& cfg = {});

/// Writes text to path, throwing Error(io) on failure.
void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

/// Parses "n,<column>" pairs out of a sweep CSV; rows whose cell is empty or
/// an error are skipped. Error(validation) if the column is missing.
std::vector<std::pair<std::uint64_t, double>> read_sweep_column(std::string_view csv, std::string_view column);

}  // namespace fstein
