#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fstein/distance.hpp"
#include "fstein/error.hpp"
#include "fstein/stein.hpp"
#include "oracle_values.hpp"

using namespace fstein;

namespace {

std::shared_ptr<const Law> pareto(double a) { return catalog("pareto", {{"alpha", std::to_string(a)}}); }

}  // namespace

TEST_CASE("Frechet pairs against high-precision values") {
  FrechetLaw phi1(1.0), phi2(2.0), phi3(3.0);
  double where = 0.0;
  auto k = kolmogorov(phi1, phi2, &where);
  CHECK(std::abs(k.value - oracle::kol_phi1_phi2) < 1e-10);
  CHECK(k.error < 1e-8);
  CHECK(std::abs(std::abs(phi1.cdf(where) - phi2.cdf(where)) - k.value) < 1e-14);
  CHECK(std::abs(kolmogorov(phi2, phi1).value - k.value) < 1e-14);

  auto tv = total_variation(phi1, phi2);
  CHECK(std::abs(tv.value - oracle::tv_phi1_phi2) < 1e-9);

  auto w = wasserstein(phi2, phi3);
  CHECK(std::abs(w.value - oracle::wass_phi2_phi3) < 1e-9);
}

TEST_CASE("identical laws are at distance zero") {
  FrechetLaw phi2(2.0);
  CHECK(kolmogorov(phi2, phi2).value == 0.0);
  CHECK(total_variation(phi2, phi2).value < 1e-12);
  CHECK(wasserstein(phi2, phi2).value < 1e-12);
}

TEST_CASE("Pareto maxima at n = 10") {
  auto q = maxima(pareto(2.0), 10);
  FrechetLaw phi2(2.0);
  auto rep = exact_oracle(*q, phi2);
  REQUIRE(rep.kol);
  REQUIRE(rep.wass);
  CHECK(std::abs(rep.kol->value - oracle::kol_pareto2_n10) < 1e-10);
  CHECK(std::abs(rep.wass->value - oracle::wass_pareto2_n10) < 1e-9);
  // each distance sits under its Stein bound
  auto b = bounds(phi2, *q);
  CHECK(rep.kol->value <= b.kol_bound);
  CHECK(rep.tv->value <= b.tv_bound);
  REQUIRE(b.wass_bound);
  CHECK(rep.wass->value <= *b.wass_bound);
}

TEST_CASE("atoms enter Kolmogorov and total variation") {
  // loglog_corrected maxima carry an atom at the left endpoint
  auto F = catalog("loglog_corrected");
  auto q = maxima(F, 50);
  FrechetLaw phi(*F->tail_index());
  const double q0 = q->starting_mass();
  REQUIRE(q0 > 0.0);
  CHECK(kolmogorov(*q, phi).value >= q0 - phi.cdf(q->left_endpoint()) - 1e-15);
  CHECK(total_variation(*q, phi).value >= q0 / 2.0);
}

TEST_CASE("infinite means") {
  FrechetLaw phi1(1.0), phi2(2.0);
  CHECK_THROWS_AS(wasserstein(phi1, phi2), Error);
  auto rep = exact_oracle(phi1, phi2);
  CHECK_FALSE(rep.wass);
  CHECK(rep.notes.size() == 1);
}

TEST_CASE("Monte Carlo agrees with the exact values") {
  auto F = pareto(2.0);
  auto q = maxima(F, 10);
  FrechetLaw phi2(2.0);
  auto exact = exact_oracle(*q, phi2);
  auto mc = monte_carlo_distances(F, 10, 2.0, 200000, 7);
  REQUIRE(mc.kol);
  REQUIRE(mc.wass);
  CHECK(mc.method == OracleReport::Method::monte_carlo);
  CHECK(std::abs(mc.kol->value - exact.kol->value) <= 3.0 * mc.kol->error);
  CHECK(std::abs(mc.wass->value - exact.wass->value) <= 3.0 * mc.wass->error);
  CHECK_FALSE(mc.tv);

  auto again = monte_carlo_distances(F, 10, 2.0, 200000, 7);
  CHECK(again.kol->value == mc.kol->value);
  CHECK(again.wass->value == mc.wass->value);
}

TEST_CASE("Monte Carlo of a Frechet law against itself") {
  auto phi = std::make_shared<FrechetLaw>(2.0);
  auto mc = monte_carlo_distances(phi, 1, 2.0, 100000, 1, 1.0);
  CHECK(mc.kol->value <= mc.kol->error);
  CHECK(mc.wass->value < 1e-12);
}

TEST_CASE("Monte Carlo sample floor") {
  try {
    monte_carlo_distances(pareto(2.0), 10, 2.0, 999, 1);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_parameter);
  }
}
