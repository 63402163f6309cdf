#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fstein/sweep.hpp"
#include "oracle_values.hpp"

using namespace fstein;

TEST_CASE("Pareto sweep") {
  SweepSpec spec;
  spec.dist = catalog("pareto");
  spec.n_values = {9, 99};
  spec.with_oracle = true;
  auto res = run_sweep(spec);
  REQUIRE(res.rows.size() == 2);
  CHECK(std::abs(*res.rows[0].delta().value - 0.1) < 1e-9);
  CHECK(std::abs(*res.rows[1].delta().value - 0.01) < 1e-9);

  const std::string csv = res.to_csv();
  CHECK(csv.rfind("n,delta,delta_err,delta_w,delta_w_err,kol_bound,tv_bound,wass_bound,kol_oracle,tv_oracle,wass_oracle\n", 0) == 0);
  auto back = read_sweep_column(csv, "delta");
  REQUIRE(back.size() == 2);
  CHECK(back[0].first == 9);
  CHECK(back[0].second == *res.rows[0].delta().value);  // %.17g round-trips exactly
  auto kol = read_sweep_column(csv, "kol_oracle");
  CHECK(kol[0].second <= read_sweep_column(csv, "kol_bound")[0].second);

  CHECK(run_sweep(spec).to_csv() == csv);
  spec.threads = 1;
  CHECK(run_sweep(spec).to_csv() == csv);
}

TEST_CASE("sweep validation") {
  SweepSpec spec;
  spec.dist = catalog("pareto");
  CHECK_THROWS_AS(run_sweep(spec), Error);
  spec.n_values = {100, 10};
  CHECK_THROWS_AS(run_sweep(spec), Error);
  spec.n_values = {10, 10};
  try {
    run_sweep(spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::validation);
  }
}

TEST_CASE("row failures are recorded, not thrown") {
  SweepSpec spec;
  spec.dist = catalog("cauchy");
  spec.n_values = {10, 100};
  spec.with_oracle = true;
  auto res = run_sweep(spec);
  for (const auto& row : res.rows) {
    CHECK(row.delta().value);
    CHECK(row.cells[9].text().empty());  // no Wasserstein distance for alpha = 1
  }
  // weighted discrepancies are refused for c_F < 0: empty, with a note
  CHECK(res.rows[0].cells[2].text().empty());
  CHECK_FALSE(res.rows[0].notes.empty());

  SweepCell bad{std::nullopt, ErrorCode::accuracy};
  CHECK(bad.text() == "ERROR:accuracy");
}

TEST_CASE("Burr sweep rescaled by n^(1/tau)") {
  SweepSpec spec;
  spec.dist = catalog("burr12");
  spec.n_values = {1000, 10000, 100000};
  spec.weighted = false;
  spec.scaling = ScalingMode::inverse;
  auto res = run_sweep(spec);
  std::vector<double> scaled;
  for (const auto& r : res.rows) scaled.push_back(*r.delta().value * std::cbrt(static_cast<double>(r.n)));
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo < 1.10);
}

TEST_CASE("rate fits") {
  std::vector<std::pair<std::uint64_t, double>> exact, flat;
  for (std::uint64_t n : {10, 100, 1000, 10000}) {
    exact.emplace_back(n, 1.0 / (static_cast<double>(n) + 1.0));
    flat.emplace_back(n, 0.25);
  }
  auto f = fit_rate(exact, [](std::uint64_t n) { return std::optional<double>(static_cast<double>(n)); });
  CHECK(std::abs(f.slope + 1.0) < 0.02);
  CHECK(f.r_squared > 0.999);
  REQUIRE(f.scaled_limits.size() == 4);
  CHECK(f.scaled_limits.back().second == doctest::Approx(10000.0 / 10001.0));

  auto c = fit_rate(flat);
  CHECK(std::abs(c.slope) < 1e-10);
  CHECK(c.r_squared >= 0.0);
  CHECK(c.r_squared <= 1.0);

  CHECK_THROWS_AS(fit_rate({{10, 1.0}, {100, 0.5}}), Error);
  CHECK_THROWS_AS(fit_rate({{10, 1.0}, {100, 0.0}, {1000, 0.1}}), Error);
}

TEST_CASE("Burr delta slope") {
  SweepSpec spec;
  spec.dist = catalog("burr12");
  spec.n_values = {1000, 10000, 100000};
  spec.weighted = false;
  spec.scaling = ScalingMode::inverse;
  std::vector<std::pair<std::uint64_t, double>> series;
  for (const auto& r : run_sweep(spec).rows) series.emplace_back(r.n, *r.delta().value);
  CHECK(std::abs(fit_rate(series).slope + 1.0 / 3.0) < 0.05);
}

TEST_CASE("Frechet comparison") {
  auto r = frechet_compare(2.0, 3.0);
  CHECK(std::abs(r.delta_closed - oracle::ff_delta_2_3) < 1e-12);
  CHECK(std::abs(r.delta_closed - r.delta_quadrature) < 1e-7);
  REQUIRE(r.delta_w_quadrature);
  CHECK(std::abs(*r.delta_w_closed - *r.delta_w_quadrature) < 1e-7);
  CHECK(r.kol <= r.kol_bound);
  CHECK(r.tv <= r.tv_bound);
  CHECK(*r.wass <= *r.wass_bound);
  CHECK(r.to_text().find("delta_w") != std::string::npos);

  auto one = frechet_compare(1.0, 2.0);
  CHECK_FALSE(one.delta_w_closed);
  CHECK(one.to_text().find("n/a (alpha <= 1)") != std::string::npos);
  CHECK_THROWS_AS(frechet_compare(3.0, 2.0), Error);
}

TEST_CASE("SVG plot") {
  SweepSpec spec;
  spec.dist = catalog("pareto");
  spec.n_values = {10, 100, 1000};
  const std::string svg = run_sweep(spec).to_svg();
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("file I/O errors") {
  CHECK_THROWS_AS(read_text_file("/nonexistent/dir/x.csv"), Error);
  try {
    write_text_file("/nonexistent/dir/x.csv", "n\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
  }
  CHECK_THROWS_AS(read_sweep_column("n,delta\n1,2\n", "tv"), Error);
}
