#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fstein/error.hpp"
#include "fstein/stein.hpp"
#include "oracle_values.hpp"

using namespace fstein;

namespace {

std::shared_ptr<const Law> pareto(double a) { return catalog("pareto", {{"alpha", std::to_string(a)}}); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("identical laws give zero") {
  FrechetLaw phi2(2.0);
  auto d = delta(phi2, phi2);
  CHECK(d.value <= 1e-10);
  CHECK(d.kinks.empty());
  CHECK(delta_w(phi2, phi2).value <= 1e-10);
}

TEST_CASE("Pareto closed forms") {
  FrechetLaw phi2(2.0);
  auto q = maxima(pareto(2.0), 9);
  auto d = delta(phi2, *q);
  CHECK(std::abs(d.value - 0.1) < 1e-9);
  CHECK(d.error_estimate < 1e-9);
  CHECK(d.p_label == phi2.label());
  CHECK(std::abs(frechet_delta(pareto(2.0), 9, false).value - 0.1) < 1e-9);

  for (std::uint64_t n : {10u, 100u, 1000u}) {
    auto qn = maxima(pareto(2.0), n);
    const double oracle = n == 10 ? oracle::pareto2_delta_w_n10
                          : n == 100 ? oracle::pareto2_delta_w_n100 : oracle::pareto2_delta_w_n1000;
    CHECK(std::abs(pareto_delta_w(2.0, n) / oracle - 1.0) < 1e-12);
    CHECK(std::abs(delta_w(phi2, *qn).value / oracle - 1.0) < 1e-7);
  }
  CHECK(code_of([] { pareto_delta_w(1.0, 10); }) == ErrorCode::nonexistent_mean);
  CHECK(code_of([] { delta_w(FrechetLaw(1.0), *maxima(catalog("pareto", {{"alpha", "1"}}), 10)); }) ==
        ErrorCode::precondition);
  CHECK(std::abs(pareto_delta_w(2.0, 1000000) * 1e6 - std::tgamma(1.5)) < 0.01);
}

TEST_CASE("Frechet against Frechet") {
  CHECK(std::abs(frechet_vs_frechet(1, 2, false) - oracle::ff_delta_1_2) < 1e-12);
  CHECK(std::abs(frechet_vs_frechet(2, 3, false) - oracle::ff_delta_2_3) < 1e-12);
  CHECK(std::abs(frechet_vs_frechet(2, 5, false) - oracle::ff_delta_2_5) < 1e-12);
  CHECK(std::abs(frechet_vs_frechet(2, 3, true) - oracle::ff_delta_w_2_3) < 1e-12);
  CHECK(std::abs(frechet_vs_frechet(3, 5, true) - oracle::ff_delta_w_3_5) < 1e-12);
  for (auto [a, b] : {std::pair{1.0, 2.0}, {2.0, 3.0}, {2.0, 5.0}}) {
    // Delta(Phi_a | Phi_b): Phi_b is the reference
    CHECK(std::abs(delta(FrechetLaw(b), FrechetLaw(a)).value - frechet_vs_frechet(a, b, false)) < 1e-7);
  }
  CHECK(std::abs(delta_w(FrechetLaw(3), FrechetLaw(2)).value - frechet_vs_frechet(2, 3, true)) < 1e-7);
  CHECK(code_of([] { frechet_vs_frechet(3, 2, false); }) == ErrorCode::precondition);
  CHECK(code_of([] { frechet_vs_frechet(1, 2, true); }) == ErrorCode::nonexistent_mean);
}

TEST_CASE("role checks") {
  auto cauchy_max = maxima(catalog("cauchy"), 10);
  FrechetLaw phi1(1.0);
  CHECK(code_of([&] { delta(phi1, *cauchy_max); }) == ErrorCode::precondition);
  auto ll = catalog("loglog_corrected");
  auto m = maxima(ll, 1000);
  CHECK(code_of([&] { delta(*m, FrechetLaw(2)); }) == ErrorCode::precondition);
  CHECK_NOTHROW(delta(FrechetLaw(2), *m));
}

TEST_CASE("Cauchy example") {
  auto c = catalog("cauchy");
  auto d = frechet_delta(c, 100, false);
  CHECK(d.value <= 1.832 / 100 + 1.965 / 1e4 + d.error_estimate);
  CHECK(std::abs(d.value - oracle::cauchy_delta_n100) < 1e-10);
  REQUIRE(d.kinks.size() == 1);
  // x = 1/(n u) maps the kink back to the root of 1 - R
  CHECK(std::abs(1.0 / (100.0 * d.kinks[0]) - oracle::cauchy_z0) < 1e-10);
  // at n = 1e4 the crossing sits where Phi_1 and its density underflow
  auto big = frechet_delta(c, 10000, false);
  REQUIRE(big.kinks.size() == 1);
  CHECK(std::abs(1.0 / (1e4 * big.kinks[0]) - oracle::cauchy_z0) < 1e-9);
  CHECK(code_of([&] { frechet_delta(c, 100, true); }) == ErrorCode::precondition);
  FrechetOptions unsafe;
  unsafe.unsafe_weighted = true;
  auto w = frechet_delta(c, 100, true, unsafe);
  CHECK(w.weighted);
  CHECK(!w.warnings.empty());
}

TEST_CASE("Burr against its change-of-variables form") {
  for (double tau : {3.0, 4.0}) {
    auto b = catalog("burr12", {{"alpha", "2"}, {"tau", std::to_string(tau)}});
    const double lo = tau == 3.0 ? oracle::burr2_3_table_delta_n1000 : oracle::burr2_4_table_delta_n1000;
    const double hi = tau == 3.0 ? oracle::burr2_3_table_delta_n100000 : oracle::burr2_4_table_delta_n100000;
    CHECK(std::abs(frechet_delta(b, 1000, false).value - lo) < 1e-9);
    CHECK(std::abs(frechet_delta(b, 100000, false).value - hi) < 1e-9);
  }
}

TEST_CASE("Burr ratio over a decade") {
  auto b = catalog("burr12", {{"alpha", "2"}, {"tau", "3"}});
  FrechetOptions exact;
  exact.scaling = ScalingMode::inverse;
  const double d3 = frechet_delta(b, 1000, false, exact).value;
  const double d4 = frechet_delta(b, 10000, false, exact).value;
  CHECK(std::abs(d3 / d4 / std::cbrt(10.0) - 1.0) < 0.1);
  // the tabulated a_n = n^(1/(alpha tau)) approaches the same rate more slowly
  const double t3 = frechet_delta(b, 1000, false).value;
  const double t4 = frechet_delta(b, 10000, false).value;
  CHECK(t3 / t4 < std::cbrt(10.0));
}

TEST_CASE("bounds assembly") {
  FrechetLaw phi2(2.0);
  auto b9 = bounds(phi2, *maxima(pareto(2.0), 9));
  CHECK(std::abs(b9.kol_bound - 0.1) < 1e-9);
  CHECK(std::abs(b9.tv_bound - 0.2) < 1e-9);
  CHECK(b9.q0 == 0.0);

  auto same = bounds(phi2, phi2);
  CHECK(same.kol_bound < 1e-10);
  CHECK(same.tv_bound < 1e-10);
  REQUIRE(same.wass_bound);
  CHECK(*same.wass_bound < 1e-9);

  auto b10 = bounds(phi2, *maxima(pareto(2.0), 10));
  REQUIRE(b10.wass_bound);
  const double expect = 2.0 * std::sqrt(std::numbers::pi) / 11.0 + 3.0 * oracle::pareto2_delta_w_n10;
  CHECK(std::abs(*b10.wass_bound - expect) < 1e-8);
  CHECK(std::abs(*b10.mu - std::sqrt(std::numbers::pi)) < 1e-12);

  auto ll = bounds(FrechetLaw(2), *maxima(catalog("loglog_corrected"), 1000));
  CHECK(ll.q0 > 0.0);
  CHECK(!ll.wass_bound);
  CHECK(!ll.notes.empty());
}

TEST_CASE("u_n diagnostic") {
  CHECK(std::abs(u_n_diagnostic(*pareto(2.0), 100) - oracle::u_n_pareto2_n100) < 1e-13);
  CHECK(std::abs(u_n_diagnostic(*catalog("cauchy"), 10000) - 1.0) < 0.01);
  FrechetLaw f(2.0);
  // n a_n r(a_n) / alpha with a_n = n^(1/2): n a^-2 = 1 exactly
  CHECK(std::abs(u_n_diagnostic(f, 50) - 1.0) < 1e-13);
}

TEST_CASE("delta of a law against itself for the catalog") {
  for (const auto& name : catalog_names()) {
    ParamList p;
    if (name == "two_term_pareto") p["endpoint"] = "root";
    auto law = catalog(name, p);
    if (law->starting_mass() > 0.0) continue;
    CAPTURE(name);
    CHECK(delta(*law, *law).value <= 1e-9);
  }
}
