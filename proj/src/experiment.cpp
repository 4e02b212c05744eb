#include "franson/experiment.hpp"

#include <algorithm>
#include <stdexcept>

namespace franson {

ResponseSource lhv_source(LocalStrategy strategy, RandomSource rs) {
  return [strategy = std::move(strategy), rs](Setting phi, Setting psi, std::uint64_t trial) {
    return run_lhv_trial(strategy, phi, psi, sample_hidden_variable(rs, trial));
  };
}

ResponseSource quantum_source(Visibility vis, RandomSource rs) {
  return [vis, rs](Setting phi, Setting psi, std::uint64_t trial) {
    const FransonEvent e = sample_franson_event(phi, psi, vis, rs, trial);
    return TrialOutcome{{e.x1, e.d1, true}, {e.x2, e.d2, true}};
  };
}

namespace {

EfficiencyEntry& entry_for(std::vector<EfficiencyEntry>& entries, int site, Setting s) {
  for (auto& e : entries) {
    if (e.site == site && e.setting == s) return e;
  }
  entries.push_back({site, s, 0, 0});
  return entries.back();
}

}  // namespace

ExperimentResult run_timed_experiment(const ResponseSource& source, const SettingsChain& chain,
                                      std::uint64_t trials_per_pair, const InterferometerTiming& timing,
                                      const RandomSource& emission_rs, std::uint64_t batch) {
  timing.validate();
  if (trials_per_pair == 0) throw std::invalid_argument("trials per pair must be positive");
  if (batch == 0) throw std::invalid_argument("batch size must be positive");

  ExperimentResult out;
  CorrelationAccumulator acc;
  std::vector<EfficiencyEntry> entries;
  std::vector<TrialResponses> runs;
  std::vector<double> times;

  for (int t = 0; t < chain.terms(); ++t) {
    const Setting phi = chain.site1_of(chain.term_order()[t]);
    const Setting psi = chain.site2_of(chain.term_order()[t]);
    PairMarginals m{phi, psi};
    const std::uint64_t base = static_cast<std::uint64_t>(t) * trials_per_pair;
    for (std::uint64_t start = 0; start < trials_per_pair; start += batch) {
      const std::uint64_t count = std::min(batch, trials_per_pair - start);
      runs.clear();
      for (std::uint64_t k = 0; k < count; ++k) {
        const std::uint64_t trial = base + start + k;
        const TrialOutcome r = source(phi, psi, trial);
        runs.push_back({trial, phi, psi, r.site1, r.site2});
        m.site1_detected += r.site1.detected;
        m.site2_detected += r.site2.detected;
        m.site1_plus += r.site1.detected && r.site1.outcome == Outcome::Plus;
        m.site2_plus += r.site2.detected && r.site2.outcome == Outcome::Plus;
      }
      // Emission clock restarts per batch; gaps exceed 2ΔT so batches never pair across.
      const auto gaps = emission_rs.substream(mix64(emission_rs.stream()) + (base + start) / batch);
      times = random_emission_times(count, timing, gaps);
      const auto events = emit_events(runs, times, timing);
      const auto ps = postselect(events, timing);
      for (const auto& p : ps.pairs) {
        acc.add(p.site1.setting, p.site2.setting, value(p.site1.outcome) * value(p.site2.outcome));
      }
      for (const auto& e : ps.efficiency.entries) {
        auto& dst = entry_for(entries, e.site, e.setting);
        dst.detections += e.detections;
        dst.coincidences += e.coincidences;
      }
      out.coincidences += ps.pairs.size();
    }
    m.trials = trials_per_pair;
    out.trials += trials_per_pair;
    out.marginals.push_back(m);
  }

  std::sort(entries.begin(), entries.end(), [](const EfficiencyEntry& a, const EfficiencyEntry& b) {
    return a.site != b.site ? a.site < b.site : a.setting.phase() < b.setting.phase();
  });
  out.efficiency.entries = std::move(entries);
  out.efficiency.eta = 1.0;
  for (const auto& e : out.efficiency.entries) out.efficiency.eta = std::min(out.efficiency.eta, e.efficiency());
  if (out.efficiency.entries.empty()) out.efficiency.eta = 0.0;
  out.table = acc.table();
  return out;
}

nlohmann::json to_json(const EfficiencyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : r.entries) {
    rows.push_back({{"site", e.site},
                    {"setting_rad", e.setting.phase()},
                    {"detections", e.detections},
                    {"coincidences", e.coincidences},
                    {"efficiency", e.efficiency()}});
  }
  return {{"eta", r.eta}, {"entries", rows}};
}

}  // namespace franson
