#include <doctest.h>

#include <cmath>

#include "franson/experiment.hpp"

using namespace franson;

TEST_SUITE("experiment") {
  TEST_CASE("AKLZ through the timed pipeline: CHSH near 2 sqrt 2 at 50% apparent efficiency") {
    const auto chain = chain_settings(4);
    const auto r = run_timed_experiment(lhv_source(aklz_strategy(), RandomSource(3, 1)), chain, 200000, {},
                                        RandomSource(3, 2));
    CHECK(r.trials == 800000);
    CHECK(std::abs(r.coincidence_fraction() - 0.5) < 0.003);
    CHECK(std::abs(r.efficiency.eta - 0.5) < 0.005);
    CHECK(r.efficiency.entries.size() == 4);
    const auto v = evaluate(r.table, chain, ModelClass::outcomes_only());
    CHECK(std::abs(v.statistic - 2 * std::sqrt(2.0)) < 4 * v.standard_error);
    CHECK_FALSE(v.violated);
  }

  TEST_CASE("quantum source: every photon detected, half the pairs coincident") {
    const auto chain = chain_settings(6);
    const auto r = run_timed_experiment(quantum_source(Visibility(1), RandomSource(4, 1)), chain, 50000, {},
                                        RandomSource(4, 2));
    for (const auto& m : r.marginals) {
      CHECK(m.site1_detected == m.trials);
      CHECK(m.site2_detected == m.trials);
    }
    CHECK(std::abs(r.coincidence_fraction() - 0.5) < 0.005);
  }

  TEST_CASE("results do not depend on the batch size apart from emission gaps") {
    const auto chain = chain_settings(4);
    const auto src = lhv_source(aklz_strategy(), RandomSource(5, 1));
    const auto a = run_timed_experiment(src, chain, 3000, {}, RandomSource(5, 2), 1000);
    const auto b = run_timed_experiment(src, chain, 3000, {}, RandomSource(5, 2), 77);
    CHECK(a.coincidences == b.coincidences);
    REQUIRE(a.table.entries().size() == b.table.entries().size());
    for (std::size_t i = 0; i < a.table.entries().size(); ++i)
      CHECK(a.table.entries()[i].estimate == b.table.entries()[i].estimate);
    CHECK(a.efficiency.eta == b.efficiency.eta);
  }

  TEST_CASE("argument checks") {
    const auto src = quantum_source(Visibility(1), RandomSource(1, 1));
    CHECK_THROWS_AS(run_timed_experiment(src, chain_settings(4), 0, {}, RandomSource(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(run_timed_experiment(src, chain_settings(4), 10, {10, 5, 10}, RandomSource(1, 2)),
                    std::invalid_argument);
  }
}
