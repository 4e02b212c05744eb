#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "franson/lhv.hpp"
#include "franson/timing.hpp"

using namespace franson;

namespace {

TrialResponses both(std::uint64_t trial, Delay d1, Delay d2, bool det1 = true, bool det2 = true) {
  return {trial, Setting(0.1), Setting(0.2), {Outcome::Plus, d1, det1}, {Outcome::Minus, d2, det2}};
}

// Responses of the AKLZ model for `n` runs with settings drawn from a small set.
std::vector<TrialResponses> aklz_runs(std::uint64_t n, const RandomSource& rs) {
  const auto strat = aklz_strategy();
  std::vector<TrialResponses> runs;
  for (std::uint64_t t = 0; t < n; ++t) {
    const Setting phi(kPi / 4 * static_cast<int>(rs.uniform(3 * t + 2) * 2));
    const Setting psi(-kPi / 2 * static_cast<int>(rs.uniform(3 * t + 1) * 2));
    const auto r = run_lhv_trial(strat, phi, psi, sample_hidden_variable(rs.substream(99), t));
    runs.push_back({t, phi, psi, r.site1, r.site2});
  }
  return runs;
}

}  // namespace

TEST_SUITE("timing") {
  TEST_CASE("timing validation") {
    CHECK_NOTHROW(InterferometerTiming{}.validate());
    CHECK_THROWS_AS((InterferometerTiming{10, 100, 100}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((InterferometerTiming{10, 0, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((InterferometerTiming{-1, 100, 10}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((InterferometerTiming{10, 100, 0}.validate()), std::invalid_argument);
  }

  TEST_CASE("emit_events examples") {
    const InterferometerTiming timing{10, 100, 10};
    std::vector<TrialResponses> runs{both(0, Delay::Early, Delay::Early)};
    std::vector<double> t0{0.0};
    auto ev = emit_events(runs, t0, timing);
    REQUIRE(ev.size() == 2);
    CHECK(ev[0].timestamp_ns == 10.0);
    CHECK(ev[1].timestamp_ns == 10.0);

    runs = {both(0, Delay::Early, Delay::Late)};
    ev = emit_events(runs, t0, timing);
    REQUIRE(ev.size() == 2);
    CHECK(std::abs(ev[1].timestamp_ns - ev[0].timestamp_ns) == 100.0);

    runs = {both(0, Delay::Early, Delay::Late, true, false)};
    ev = emit_events(runs, t0, timing);
    REQUIRE(ev.size() == 1);
    CHECK(ev[0].site == 1);
  }

  TEST_CASE("emit_events orders each run by timestamp") {
    const InterferometerTiming timing{};
    std::vector<TrialResponses> runs{both(0, Delay::Late, Delay::Early)};
    std::vector<double> t0{0.0};
    const auto ev = emit_events(runs, t0, timing);
    CHECK(ev[0].site == 2);
    CHECK(ev[0].timestamp_ns < ev[1].timestamp_ns);
  }

  TEST_CASE("emission gaps must exceed 2 dT") {
    const InterferometerTiming timing{10, 100, 10};
    std::vector<TrialResponses> runs{both(0, Delay::Early, Delay::Early), both(1, Delay::Early, Delay::Early)};
    std::vector<double> ok{0.0, 200.5}, bad{0.0, 200.0};
    CHECK_NOTHROW(emit_events(runs, ok, timing));
    CHECK_THROWS_AS(emit_events(runs, bad, timing), std::invalid_argument);
    std::vector<double> short_list{0.0};
    CHECK_THROWS_AS(emit_events(runs, short_list, timing), std::invalid_argument);
  }

  // Fixture: four runs. Runs 0-2 are coincident (EE, LL, EE); run 3 splits E/L.
  // Site 1: 4 detections, 3 coincident; site 2: 4 detections, 3 coincident.
  TEST_CASE("hand-built 8-event dataset gives eta = 0.75") {
    const InterferometerTiming timing{10, 100, 10};
    std::vector<DetectionEvent> ev{
        {1, 0, 10, Outcome::Plus, Setting(0.1)},    {2, 0, 10, Outcome::Plus, Setting(0.2)},
        {1, 1, 410, Outcome::Minus, Setting(0.1)},  {2, 1, 410, Outcome::Plus, Setting(0.2)},
        {1, 2, 610, Outcome::Plus, Setting(0.1)},   {2, 2, 610, Outcome::Minus, Setting(0.2)},
        {1, 3, 910, Outcome::Plus, Setting(0.1)},   {2, 3, 1010, Outcome::Plus, Setting(0.2)},
    };
    const auto r = postselect(ev, timing);
    CHECK(r.pairs.size() == 3);
    REQUIRE(r.efficiency.entries.size() == 2);
    for (const auto& e : r.efficiency.entries) {
      CHECK(e.detections == 4);
      CHECK(e.coincidences == 3);
    }
    CHECK(r.efficiency.eta == 0.75);
  }

  TEST_CASE("postselect uses a strict window and rejects unsorted input") {
    const InterferometerTiming timing{10, 100, 10};
    std::vector<DetectionEvent> edge{{1, 0, 0, Outcome::Plus, Setting(0)}, {2, 0, 10, Outcome::Plus, Setting(0)}};
    CHECK(postselect(edge, timing).pairs.empty());
    std::vector<DetectionEvent> inside{{1, 0, 0, Outcome::Plus, Setting(0)}, {2, 0, 9.999, Outcome::Plus, Setting(0)}};
    CHECK(postselect(inside, timing).pairs.size() == 1);
    std::vector<DetectionEvent> unsorted{{1, 0, 10, Outcome::Plus, Setting(0)}, {2, 0, 5, Outcome::Plus, Setting(0)}};
    CHECK_THROWS_AS(postselect(unsorted, timing), std::invalid_argument);
  }

  TEST_CASE("postselection equals delay-class matching on every run") {
    const InterferometerTiming timing{};
    const RandomSource rs(17, 2);
    const auto runs = aklz_runs(20000, rs);
    const auto times = random_emission_times(runs.size(), timing, rs.substream(5));
    const auto ev = emit_events(runs, times, timing);
    const auto r = postselect(ev, timing);
    std::set<std::uint64_t> paired;
    for (const auto& p : r.pairs) {
      CHECK(p.site1.trial == p.site2.trial);
      paired.insert(p.site1.trial);
    }
    std::size_t expected = 0;
    for (const auto& run : runs) {
      const bool match = run.site1.detected && run.site2.detected && run.site1.delay == run.site2.delay;
      expected += match;
      CHECK(paired.count(run.trial) == static_cast<std::size_t>(match));
    }
    CHECK(r.pairs.size() == expected);
  }

  TEST_CASE("eta is invariant under time translation and window shrinking") {
    const InterferometerTiming timing{};
    const RandomSource rs(3, 3);
    const auto runs = aklz_runs(5000, rs);
    auto times = random_emission_times(runs.size(), timing, rs.substream(6));
    const auto base = postselect(emit_events(runs, times, timing), timing);
    for (double shift : {-1e6, 12.5, 3.3e7}) {
      auto shifted = times;
      for (auto& t : shifted) t += shift;
      const auto r = postselect(emit_events(runs, shifted, timing), timing);
      CHECK(r.efficiency.eta == base.efficiency.eta);
      CHECK(r.pairs.size() == base.pairs.size());
    }
    for (double w : {5.0, 1.0, 0.01}) {
      const InterferometerTiming narrow{timing.short_arm_delay_ns, timing.path_difference_ns, w};
      const auto r = postselect(emit_events(runs, times, narrow), narrow);
      REQUIRE(r.pairs.size() == base.pairs.size());
      for (std::size_t i = 0; i < r.pairs.size(); ++i) CHECK(r.pairs[i].site1.trial == base.pairs[i].site1.trial);
    }
  }

  TEST_CASE("event CSV round trip") {
    const InterferometerTiming timing{};
    const RandomSource rs(8, 1);
    const auto runs = aklz_runs(500, rs);
    const auto times = random_emission_times(runs.size(), timing, rs.substream(2));
    const auto ev = emit_events(runs, times, timing);
    std::stringstream ss;
    write_events_csv(ss, ev);
    CHECK(ss.str().rfind("site,trial,timestamp_ns,outcome,setting_rad\n", 0) == 0);
    const auto back = read_events_csv(ss);
    REQUIRE(back.size() == ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) {
      CHECK(back[i].site == ev[i].site);
      CHECK(back[i].trial == ev[i].trial);
      CHECK(back[i].timestamp_ns == ev[i].timestamp_ns);
      CHECK(back[i].outcome == ev[i].outcome);
      CHECK(back[i].setting.phase() == ev[i].setting.phase());
    }
    std::stringstream broken("site,trial,timestamp_ns,outcome,setting_rad\n3,0,1,1,0\n");
    CHECK_THROWS_AS(read_events_csv(broken), std::invalid_argument);
  }

  TEST_CASE("random emission gaps exceed 2 dT") {
    const InterferometerTiming timing{};
    const auto t = random_emission_times(1000, timing, RandomSource(1, 1));
    for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] - t[i - 1] > 2 * timing.path_difference_ns);
  }
}
