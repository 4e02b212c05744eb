// Full measurement pipeline: per-run responses, time-tagged detection events,
// window postselection, and correlation tables over the coincidences.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "franson/core.hpp"
#include "franson/inequalities.hpp"
#include "franson/lhv.hpp"
#include "franson/quantum.hpp"
#include "franson/random.hpp"
#include "franson/timing.hpp"

namespace franson {

/// Produces both sites' responses for one run; `trial` is the global run index.
using ResponseSource = std::function<TrialOutcome(Setting phi, Setting psi, std::uint64_t trial)>;

/// λ drawn per run from `rs`, then the strategy's local responses.
ResponseSource lhv_source(LocalStrategy strategy, RandomSource rs);

/// Exact sampler of the two-photon source: every photon is detected, with a random Early/Late delay.
ResponseSource quantum_source(Visibility vis, RandomSource rs);

/// Unconditioned single-site tallies for one setting pair.
struct PairMarginals {
  Setting site1;
  Setting site2;
  std::uint64_t trials = 0;
  std::uint64_t site1_detected = 0;
  std::uint64_t site1_plus = 0;
  std::uint64_t site2_detected = 0;
  std::uint64_t site2_plus = 0;
};

struct ExperimentResult {
  CorrelationTable table;  ///< coincidences only
  EfficiencyReport efficiency;
  std::vector<PairMarginals> marginals;  ///< one per chain term, in term order
  std::uint64_t trials = 0;
  std::uint64_t coincidences = 0;

  double coincidence_fraction() const { return trials == 0 ? 0.0 : static_cast<double>(coincidences) / trials; }
};

/// Runs `trials_per_pair` runs for each chain term through emit_events and
/// postselect, in batches of `batch` runs. Run k of term t has global index
/// t·trials_per_pair + k, so results do not depend on the batch size.
ExperimentResult run_timed_experiment(const ResponseSource& source, const SettingsChain& chain,
                                      std::uint64_t trials_per_pair, const InterferometerTiming& timing,
                                      const RandomSource& emission_rs, std::uint64_t batch = 1U << 16);

nlohmann::json to_json(const EfficiencyReport& r);

}  // namespace franson
