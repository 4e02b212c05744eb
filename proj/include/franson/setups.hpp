// Event-level presets for the Franson setup and three modified setups that
// differ from it only in how pairs are selected.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "franson/core.hpp"
#include "franson/inequalities.hpp"
#include "franson/quantum.hpp"
#include "franson/random.hpp"

namespace franson {

enum class SetupVariant { Franson, PolarizationEntangled, SwitchedMirrors, CrossCoupled };

std::string to_string(SetupVariant v);
/// Accepts "franson", "polarization-entangled", "switched-mirrors", "cross-coupled".
SetupVariant setup_variant_from_string(const std::string& s);

struct SetupMetadata {
  ModelClass model;
  bool path_is_epr_real;
};

SetupMetadata metadata(SetupVariant v);

struct SetupTrial {
  Outcome x1 = Outcome::Plus;
  Outcome x2 = Outcome::Plus;
  Delay d1 = Delay::Early;
  Delay d2 = Delay::Early;
  /// CrossCoupled only: both photons were routed to the same site.
  bool routed_together = false;

  bool coincident() const { return !routed_together && d1 == d2; }
};

/// One emitted pair. Franson delegates to the quantum sampler. Polarization-
/// entangled and switched-mirror pairs share one delay bit. Cross-coupled pairs
/// are routed together with probability 1/2, otherwise share a delay bit.
/// Coincident outcomes have correlation v·cos(φ + ψ) in every variant.
SetupTrial sample_setup_trial(SetupVariant v, Setting phi, Setting psi, Visibility vis, const RandomSource& rs,
                              std::uint64_t trial);

struct PairCounts {
  Setting site1;
  Setting site2;
  std::uint64_t trials = 0;
  std::uint64_t coincidences = 0;
  std::uint64_t site1_plus = 0;  ///< trials where site 1 registered X1 = +1 (photon present at site 1)
  std::uint64_t site1_present = 0;
  std::uint64_t site2_plus = 0;
  std::uint64_t site2_present = 0;
  std::uint64_t early = 0;  ///< trials with a shared or site-1 Early delay
};

struct SetupResult {
  SetupVariant variant;
  CorrelationTable table;
  std::vector<PairCounts> pairs;
  std::uint64_t trials = 0;
  std::uint64_t coincidences = 0;
  double coincidence_fraction = 0.0;
  Verdict verdict;
};

/// Runs `trials_per_pair` trials for every setting pair in the chain, in term
/// order, and evaluates the chain statistic against the variant's model class.
SetupResult simulate_setup(SetupVariant v, const SettingsChain& chain, Visibility vis, std::uint64_t trials_per_pair,
                           const RandomSource& rs);

nlohmann::json to_json(const SetupResult& r);

}  // namespace franson
