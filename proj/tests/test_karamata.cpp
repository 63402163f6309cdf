#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fstein/error.hpp"
#include "fstein/karamata.hpp"

using namespace fstein;

namespace {

std::vector<double> t_from(double lo, double hi) {
  std::vector<double> out;
  for (double t : default_t_grid(hi)) {
    if (t >= lo) out.push_back(t);
  }
  return out;
}

}  // namespace

TEST_CASE("default grids") {
  auto t = default_t_grid();
  auto x = default_x_grid();
  CHECK(t.size() == 20);
  CHECK(x.size() == 41);
  CHECK(t.front() == doctest::Approx(1e2));
  CHECK(t.back() == doctest::Approx(1e6));
  CHECK(std::is_sorted(t.begin(), t.end()));
  CHECK_THROWS_AS(default_t_grid(50.0), Error);
}

TEST_CASE("index estimates") {
  auto pareto = catalog("pareto");
  auto cauchy = catalog("cauchy");
  auto burr = catalog("burr12");
  const auto x = default_x_grid();
  CHECK(std::abs(estimate_index([&](double s) { return pareto->survival(s); }, default_t_grid(), x) + 2.0) < 1e-6);
  CHECK(std::abs(estimate_index([&](double s) { return cauchy->pdf(s); }, default_t_grid(), x) + 2.0) < 1e-3);
  CHECK(std::abs(estimate_index([&](double s) { return burr->survival(s); }, default_t_grid(1e4), x) + 6.0) < 1e-2);
  CHECK_THROWS_AS(estimate_index([](double s) { return s > 1e3 ? 0.0 : 1.0 / s; }, default_t_grid(), x), Error);
}

TEST_CASE("Karamata ratio") {
  auto k = karamata_limit(*catalog("pareto"), default_t_grid());
  REQUIRE(k.size() == 20);
  for (double v : k) CHECK(std::abs(v - 2.0) < 1e-9);

  const double t4[] = {1e4};
  CHECK(std::abs(karamata_limit(*catalog("cauchy"), t4)[0] - 1.0) < 1e-3);

  // t f / (1 - F) = alpha + 1 / (1 + log t): slow, inside 15% at 1e6
  const double t6[] = {1e6};
  const double lc = karamata_limit(*catalog("log_corrected"), t6)[0];
  CHECK(lc == doctest::Approx(2.0 + 1.0 / (1.0 + std::log(1e6))).epsilon(1e-10));
  CHECK(std::abs(lc - 2.0) < 0.15 * 2.0);

  // a light tail underflows and truncates the sequence
  FrechetLaw phi(2.0);
  std::vector<std::string> warnings;
  const double far[] = {1e2, 1e160, 1e200};
  auto kk = karamata_limit(phi, far, &warnings);
  CHECK(kk.size() < 3);
}

TEST_CASE("Potter envelopes") {
  auto pareto = catalog("pareto");
  auto cauchy = catalog("cauchy");
  auto burr = catalog("burr12");
  const auto x = default_x_grid();
  const auto small_x = log_spaced(1e-2, 1.0, 21);

  for (double d : {0.1, 0.5, 1.0}) {
    CHECK(potter_check([&](double s) { return pareto->survival(s); }, -2.0, d, 1e3, default_t_grid(), x).empty());
  }
  PotterFit fit;
  CHECK(potter_check([&](double s) { return cauchy->pdf(s); }, -2.0, 0.5, 1e3, t_from(1e3, 1e6), small_x, &fit).empty());
  CHECK(fit.c >= 1.0);
  CHECK(potter_check([&](double s) { return burr->reverse_hazard(s); }, -7.0, 0.5, 1e3, t_from(1e3, 1e6), x).empty());

  // a ratio that drifts away from x^rho as t grows is caught
  auto drifting = [](double s) { return std::pow(s, -2.0) * std::exp(std::log(s) * std::log(s) / 100.0); };
  CHECK_FALSE(potter_check(drifting, -2.0, 0.5, 1e2, default_t_grid(), x).empty());
}

TEST_CASE("n(1 - F(a_n))") {
  const std::uint64_t ns[] = {10, 100, 1000, 10000};
  for (const auto& [n, v] : da_check(*catalog("pareto", {{"alpha", "3"}}), ns)) CHECK(std::abs(v - 1.0) < 1e-12);

  auto cauchy = catalog("cauchy");
  const std::uint64_t n4[] = {10000};
  auto good = da_check(*cauchy, n4, [](std::uint64_t n) { return static_cast<double>(n) / std::numbers::pi; });
  CHECK(std::abs(good[0].second - 1.0) < 1e-4);
  auto bad = da_check(*cauchy, n4, [](std::uint64_t n) { return static_cast<double>(n); });
  CHECK(std::abs(bad[0].second - 1.0 / std::numbers::pi) < 1e-4);
}

TEST_CASE("RV report") {
  auto rep = rv_report(*catalog("cauchy"));
  CHECK(rep.t_grid.size() == 20);
  CHECK(rep.ratio_table.size() == rep.t_grid.size());
  CHECK(std::abs(rep.estimated_index + 2.0) < 1e-3);
  CHECK(rep.potter_violations.empty());
  const std::string csv = rep.to_csv();
  CHECK(csv.find("# summary") == 0);
  CHECK(csv.find("# n_tail_check\nn,value\n10,") != std::string::npos);

  // support starts at e^e: the x grid is cut so t x stays inside it
  auto ll = rv_report(*catalog("loglog_corrected"));
  CHECK(ll.x_grid.size() < 41);
  CHECK(ll.x_grid.front() * 1e2 >= 2.0 * std::exp(std::exp(1.0)));

  RVOptions wrong;
  wrong.n_grid = {10, 100};
  auto off = rv_report(*catalog("gpd"), wrong);
  CHECK(off.n_tail_check.size() == 2);
}
