#include <doctest.h>

#include <cmath>
#include <set>

#include "franson/quadrature.hpp"
#include "franson/strategyopt.hpp"

using namespace franson;

namespace {

GameSpec game(const ModelClass& mc, int terms) { return GameSpec::for_model(mc, chain_settings(terms)); }

// Brute-force chained statistic of one deterministic vertex without postselection:
// every run counts, correlation = product of the two outcome maps.
double plain_vertex_statistic(const DeterministicVertex& v, const SettingsChain& chain) {
  double s = 0.0;
  const auto& order = chain.term_order();
  for (std::size_t t = 0; t < order.size(); t += 2) {
    auto e = [&](const ChainTerm& term) {
      return term.sign * value(v.site1.outcome(term.site1_index)) * value(v.site2.outcome(term.site2_index));
    };
    s += std::abs(e(order[t]) + e(order[t + 1]));
  }
  return s;
}

}  // namespace

TEST_SUITE("strategyopt") {
  TEST_CASE("vertex counts per class") {
    CHECK(enumerate_site_vertices(game(ModelClass::plain_local_realism(), 4)).size() == 4);
    CHECK(enumerate_vertices(game(ModelClass::plain_local_realism(), 4)).size() == 16);
    CHECK(enumerate_site_vertices(game(ModelClass::path_realism(), 4)).size() == 8);
    CHECK(enumerate_site_vertices(game(ModelClass::emission_time_realism(), 4)).size() == 64);
    CHECK(enumerate_vertices(game(ModelClass::emission_time_realism(), 4)).size() == 4096);
    CHECK(site_vertex_count(game(ModelClass::outcomes_only(), 6)) == 64);
    CHECK(site_vertex_count(game(ModelClass::inefficiency(0.9), 4)) == 16);
  }

  TEST_CASE("enumeration is complete and duplicate-free") {
    for (const auto& mc : {ModelClass::plain_local_realism(), ModelClass::path_realism(),
                           ModelClass::emission_time_realism(), ModelClass::outcomes_only()}) {
      const auto g = game(mc, 4);
      const auto sites = enumerate_site_vertices(g);
      std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>> seen;
      for (const auto& s : sites) seen.insert({s.outcome_minus, s.late_outcome_minus, s.delay_late, s.undetected});
      CHECK(seen.size() == sites.size());
      CHECK(sites.size() == site_vertex_count(g));
      if (mc.tag() == ModelTag::PathRealism) {
        for (const auto& s : sites) CHECK((s.delay_late == 0 || s.delay_late == 3));
      }
    }
  }

  TEST_CASE("resource limit") {
    auto g = game(ModelClass::emission_time_realism(), 8);
    CHECK_THROWS_AS(enumerate_vertices(g), ResourceLimitError);
    CHECK_THROWS_AS(max_statistic(g, {}), ResourceLimitError);
    auto small = game(ModelClass::plain_local_realism(), 4);
    small.vertex_limit = 8;
    CHECK_THROWS_AS(enumerate_vertices(small), ResourceLimitError);
  }

  TEST_CASE("exact maxima: PlainLocalRealism and PathRealism CHSH give 2") {
    const auto plr = max_statistic(game(ModelClass::plain_local_realism(), 4), {});
    CHECK(plr.exact);
    CHECK(plr.value == 2.0);
    const auto path = max_statistic(game(ModelClass::path_realism(), 4), {});
    CHECK(path.exact);
    CHECK(path.value == 2.0);
    const auto r = verify_bound(game(ModelClass::plain_local_realism(), 4), {});
    CHECK(r.pass);
    CHECK(r.tight);
    CHECK(r.bound == 2.0);
  }

  TEST_CASE("PlainLocalRealism enumeration max equals terms - 2 for chains of 4 to 10 terms") {
    for (int terms : {4, 6, 8, 10}) {
      const auto g = game(ModelClass::plain_local_realism(), terms);
      const auto m = max_statistic(g, {});
      CHECK(m.value == terms - 2.0);
      // independent brute force over all vertices
      double best = 0.0;
      for (const auto& v : enumerate_vertices(g)) best = std::max(best, plain_vertex_statistic(v, g.chain));
      CHECK(best == terms - 2.0);
    }
  }

  TEST_CASE("optimizer respects the emission-time and trivial bounds") {
    const OptimizerBudget budget{16, 300, 3};
    const auto e4 = verify_bound(game(ModelClass::emission_time_realism(), 4), budget);
    CHECK(e4.pass);
    CHECK(e4.best_found <= 3.0 + 1e-6);
    CHECK_FALSE(e4.exact);
    const auto e6 = verify_bound(game(ModelClass::emission_time_realism(), 6), {8, 300, 3});
    CHECK(e6.pass);
    CHECK(e6.best_found <= 5.0 + 1e-6);
    const auto oo = verify_bound(game(ModelClass::outcomes_only(), 4), budget);
    CHECK(oo.pass);
    CHECK(oo.best_found <= 4.0 + 1e-6);
    const auto path = verify_bound(game(ModelClass::path_realism(), 4), budget);
    // larger model classes never score lower
    CHECK(oo.best_found >= e4.best_found - 1e-9);
    CHECK(e4.best_found >= path.best_found - 1e-9);
  }

  TEST_CASE("optimizer witnesses are feasible and re-evaluate to the reported value") {
    for (const auto& mc : {ModelClass::emission_time_realism(), ModelClass::outcomes_only(),
                           ModelClass::inefficiency(0.9), ModelClass::delays(0.9)}) {
      const auto g = game(mc, 4);
      const auto m = max_statistic(g, {8, 200, 5});
      const auto ev = evaluate_mixture(g, m.witness);
      CHECK(ev.feasible);
      CHECK(ev.constraint_residual < 1e-9);
      CHECK(ev.min_weight >= 0.0);
      CHECK(ev.statistic == doctest::Approx(m.value).epsilon(1e-9));
      CHECK(ev.statistic <= bound_for(mc, 4) + 1e-6);
    }
  }

  TEST_CASE("emission-time mixtures must hold P(EE | a, b) at 1/4 for every pair") {
    // All runs Early at both sites: EE mass 1, violates the pinned value.
    const auto g = game(ModelClass::emission_time_realism(), 4);
    MixedStrategy all_early{{DeterministicVertex{}}, {1.0}};
    const auto ev = evaluate_mixture(g, all_early);
    CHECK_FALSE(ev.feasible);
    CHECK(ev.constraint_residual == doctest::Approx(0.75));
  }

  TEST_CASE("the AKLZ witness is a feasible OutcomesOnly mixture at 2 sqrt 2") {
    auto g = game(ModelClass::outcomes_only(), 4);
    const auto mix = aklz_witness(g.chain, {1024, 256});
    const auto ev = evaluate_mixture(g, mix);
    CHECK(ev.feasible);
    CHECK(std::abs(ev.statistic - 2 * std::sqrt(2.0)) < 1e-6);
    for (double c : ev.coincidence) CHECK(std::abs(c - 0.5) < 1e-6);
    g.equal_delay_mass = 0.25;
    CHECK(evaluate_mixture(g, mix).feasible);
  }

  TEST_CASE("strategy_from_mixture reproduces the mixture statistics under quadrature") {
    const auto g = game(ModelClass::outcomes_only(), 4);
    const auto m = max_statistic(g, {4, 200, 9});
    const auto strat = strategy_from_mixture(g, m.witness);
    const auto q = QuadratureTable::integrate(strat, g.chain.site1_settings(), g.chain.site2_settings(), {16, 4096});
    const auto ev = evaluate_mixture(g, m.witness);
    std::size_t t = 0;
    for (const auto& term : g.chain.term_order()) {
      const auto& st = q.at(term.site1_index, term.site2_index);
      CHECK(std::abs(st.coincidence - ev.coincidence[t]) < 1e-9);
      ++t;
    }
    CHECK_THROWS_AS(strategy_from_mixture(game(ModelClass::emission_time_realism(), 4), m.witness),
                    std::invalid_argument);
  }

  TEST_CASE("random chains are valid and deterministic") {
    const RandomSource rs(4, 1);
    for (int terms : {4, 6}) {
      for (std::uint64_t i = 0; i < 20; ++i) {
        const auto a = random_chain(terms, rs, i);
        const auto b = random_chain(terms, rs, i);
        CHECK(a.terms() == terms);
        for (std::size_t k = 0; k < a.settings_per_site(); ++k) CHECK(a.site1_settings()[k] == b.site1_settings()[k]);
      }
    }
  }

  TEST_CASE("witness JSON lists the maps explicitly") {
    const auto g = game(ModelClass::emission_time_realism(), 4);
    const auto m = max_statistic(g, {2, 50, 1});
    const auto j = to_json(g, m.witness);
    REQUIRE(j["vertices"].size() == m.witness.vertices.size());
    const auto& v0 = j["vertices"][0];
    CHECK(v0["site1"]["outcomes"].size() == 2);
    CHECK(v0["site1"]["late_outcomes"].size() == 2);
    CHECK(v0["site2"]["delays"].size() == 2);
    double total = 0.0;
    for (const auto& v : j["vertices"]) total += v["weight"].get<double>();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}
