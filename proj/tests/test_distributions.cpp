#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fstein/error.hpp"
#include "fstein/law.hpp"

using namespace fstein;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::vector<std::shared_ptr<const Distribution>> all_laws() {
  std::vector<std::shared_ptr<const Distribution>> out;
  for (const auto& name : catalog_names()) {
    ParamList p;
    if (name == "two_term_pareto") p["endpoint"] = "root";
    out.push_back(catalog(name, p));
  }
  return out;
}

}  // namespace

TEST_CASE("reverse hazard examples") {
  FrechetLaw phi2(2.0);
  CHECK(rel(phi2.reverse_hazard(1.0), 2.0) < 1e-15);
  auto p1 = catalog("pareto", {{"alpha", "1"}});
  CHECK(rel(p1->reverse_hazard(2.0), 0.5) < 1e-14);
  MaximaLaw m(catalog("pareto", {{"alpha", "2"}}), 4, 2.0);
  CHECK(rel(m.reverse_hazard(1.0), 8.0 / 3.0) < 1e-14);
  CHECK(m.reverse_hazard(0.0) == 0.0);
}

TEST_CASE("scaling sequence examples") {
  CHECK(rel(scaling_sequence(*catalog("pareto", {{"alpha", "2"}}), 100), 10.0) < 1e-14);
  auto cauchy = catalog("cauchy");
  CHECK(rel(scaling_sequence(*cauchy, 50), 50.0 / std::numbers::pi) < 1e-14);
  const double exact = std::tan(std::numbers::pi * (0.5 - 1.0 / 50.0));
  CHECK(rel(scaling_sequence(*cauchy, 50, ScalingMode::inverse), exact) < 1e-12);
  CHECK(rel(scaling_sequence(*catalog("burr12", {{"alpha", "2"}, {"tau", "3"}}), 64), 2.0) < 1e-14);
}

TEST_CASE("numeric inversion agrees with closed forms") {
  for (const auto& law : all_laws()) {
    CAPTURE(law->label());
    for (std::uint64_t n : {10u, 1000u, 100000u}) {
      const double a = scaling_sequence(*law, n, ScalingMode::inverse);
      if (a == law->left_endpoint()) {
        // 1/n lies inside the atom: the generalized inverse sits at c
        CHECK(law->survival(a) < 1.0 / static_cast<double>(n));
        continue;
      }
      CHECK(rel(static_cast<double>(n) * law->survival(a), 1.0) < 1e-11);
    }
  }
}

TEST_CASE("catalog rows") {
  auto p3 = catalog("pareto", {{"alpha", "3"}});
  CHECK(p3->left_endpoint() == 1.0);
  CHECK(p3->tail_index().value() == 3.0);
  CHECK(rel(p3->table_scaling(8).value(), 2.0) < 1e-14);
  CHECK(rel(p3->cdf(2.0), 1.0 - 1.0 / 8.0) < 1e-15);

  auto fr = catalog("frechet", {{"alpha", "2"}});
  CHECK(dynamic_cast<const FrechetLaw*>(fr.get()) != nullptr);

  try {
    catalog("two_term_pareto", {{"alpha", "1"}, {"beta", "2"}});
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_parameter);
  }
  auto tt = catalog("two_term_pareto", {{"alpha", "1"}, {"beta", "2"}, {"endpoint", "root"}});
  const double x0 = tt->left_endpoint();
  CHECK(std::abs(std::pow(x0, -1.0) + std::pow(x0, -3.0) - 1.0) < 1e-15);
  CHECK(tt->cdf(x0) == 0.0);

  CHECK_THROWS_AS(catalog("burr12", {{"tau", "1"}}), Error);
  CHECK_THROWS_AS(catalog("gpd", {{"xi", "1.5"}}), Error);
  CHECK_THROWS_AS(catalog("two_term_pareto", {{"alpha", "3"}, {"beta", "2"}, {"endpoint", "root"}}), Error);
  CHECK_THROWS_AS(catalog("pareto", {{"alpha", "abc"}}), Error);
  CHECK_THROWS_AS(catalog("pareto", {{"shape", "2"}}), Error);
  try {
    catalog("weibull");
    FAIL("expected unknown name");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_distribution);
  }
}

TEST_CASE("maxima examples") {
  auto p2 = catalog("pareto", {{"alpha", "2"}});
  auto m = maxima(p2, 4);
  CHECK(rel(m->left_endpoint(), 0.5) < 1e-15);
  for (double x : {0.6, 1.0, 3.0}) CHECK(rel(m->cdf(x), std::pow(1.0 - 0.25 / (x * x), 4)) < 1e-13);

  auto one = maxima(p2, 1, 1.0);
  for (double x : {1.0, 1.5, 7.0}) {
    CHECK(rel(one->cdf(x), p2->cdf(x)) < 1e-14);
    CHECK(rel(one->pdf(x), p2->pdf(x)) < 1e-14);
  }
  auto mc = maxima(catalog("cauchy"), 10);
  CHECK(mc->left_endpoint() == -INFINITY);
  CHECK(mc->starting_mass() == 0.0);
}

TEST_CASE("means") {
  FrechetLaw f2(2.0);
  CHECK(rel(mean(f2), std::sqrt(std::numbers::pi)) < 1e-13);
  try {
    mean(FrechetLaw(1.0));
    FAIL("expected nonexistent mean");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::nonexistent_mean);
  }
  CHECK(rel(mean(*catalog("pareto", {{"alpha", "3"}})), 1.5) < 1e-14);
  // quadrature agrees with closed forms
  for (const auto& law : all_laws()) {
    if (!has_finite_mean(*law)) continue;
    auto closed = law->closed_form_mean();
    if (!closed) continue;
    CAPTURE(law->label());
    const double c = law->left_endpoint();
    const auto grid = probe_grid(*law, 64);
    const double q = integrate([&](double x) { return x * law->pdf(x); }, c, INFINITY, {}, grid).value;
    CHECK(rel(q, *closed) < 1e-8);
  }
}

TEST_CASE("assumption-0 invariants on the catalog") {
  for (const auto& law : all_laws()) {
    CAPTURE(law->label());
    const auto grid = probe_grid(*law, 64);
    const double c = law->left_endpoint();
    const double f0 = law->starting_mass();
    double prev = -1.0;
    for (double x : grid) {
      CHECK(law->pdf(x) > 0.0);
      const double F = law->cdf(x);
      CHECK(F >= prev);
      CHECK(F < 1.0);
      prev = F;
      // round trips through whichever tail carries the information
      if (F <= 0.5)
        CHECK(rel(law->quantile(F), x) < 1e-9);
      else
        CHECK(rel(law->survival_quantile(law->survival(x)), x) < 1e-9);
    }
    // f0 + int_c^x f = F(x) at a few interior points
    for (std::size_t k = grid.size() / 4; k < grid.size(); k += grid.size() / 4) {
      const double x = grid[k];
      std::vector<double> bp(grid.begin(), grid.begin() + static_cast<long>(k));
      const double lo = std::isfinite(c) ? c : -INFINITY;
      const double F = f0 + integrate([&](double t) { return law->pdf(t); }, lo, x, {}, bp).value;
      CHECK(std::abs(F - law->cdf(x)) < 1e-8);
    }
  }
}

TEST_CASE("maxima laws are valid cdfs with the right mass") {
  for (const auto& law : all_laws()) {
    for (std::uint64_t n : {1u, 10u, 100u}) {
      auto m = maxima(law, n, n == 1 ? std::optional<double>(1.0) : std::nullopt, ScalingMode::inverse);
      CAPTURE(m->label());
      const double c = m->left_endpoint();
      const auto grid = probe_grid(*m, 1000);
      double prev = 0.0;
      for (double x : grid) {
        const double F = m->cdf(x);
        CHECK(F >= prev);
        prev = F;
      }
      if (std::isfinite(c))
        CHECK(std::abs(m->cdf(c) - m->starting_mass()) < 1e-12);
      else
        CHECK(m->cdf(grid.front()) < 1e-9);
      CHECK(m->cdf(grid.back()) > 1.0 - 1e-9);
      const auto coarse = probe_grid(*m, 64);
      const double mass = integrate([&](double x) { return m->pdf(x); }, c, INFINITY, {}, coarse).value;
      CHECK(std::abs(mass - (1.0 - m->starting_mass())) < 1e-8);
      // structural identity r_{F_n}(x) = n a_n r_F(a_n x) against pdf/cdf
      for (std::size_t k = 0; k < grid.size(); k += 97) {
        const double x = grid[k];
        const double direct = std::exp(m->log_pdf(x) - m->log_cdf(x));
        CHECK(rel(m->reverse_hazard(x), direct) < 1e-12);
      }
    }
  }
}

TEST_CASE("loglog_corrected starting mass") {
  auto l = catalog("loglog_corrected", {{"alpha", "2"}});
  const double f0 = 1.0 - std::exp(-2.0 * std::numbers::e);
  CHECK(rel(l->starting_mass(), f0) < 1e-14);
  auto m = maxima(l, 5, 3.0);
  CHECK(rel(m->starting_mass(), std::pow(f0, 5)) < 1e-13);
  CHECK(m->quantile(0.5 * std::pow(f0, 5)) == m->left_endpoint());
}

TEST_CASE("n (1 - F(a_n)) at n = 1e4 for exact closed-form rows") {
  for (const char* name : {"pareto", "cauchy", "loglogistic", "gpd"}) {
    auto law = catalog(name);
    const double a = scaling_sequence(*law, 10000);
    CAPTURE(name);
    CHECK(std::abs(1e4 * law->survival(a) - 1.0) <= 0.05);
  }
}
