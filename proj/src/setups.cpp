#include "franson/setups.hpp"

#include <stdexcept>

namespace franson {

std::string to_string(SetupVariant v) {
  switch (v) {
    case SetupVariant::Franson: return "franson";
    case SetupVariant::PolarizationEntangled: return "polarization-entangled";
    case SetupVariant::SwitchedMirrors: return "switched-mirrors";
    case SetupVariant::CrossCoupled: return "cross-coupled";
  }
  return "unknown";
}

SetupVariant setup_variant_from_string(const std::string& s) {
  for (auto v : {SetupVariant::Franson, SetupVariant::PolarizationEntangled, SetupVariant::SwitchedMirrors,
                 SetupVariant::CrossCoupled}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown setup variant '" + s + "'");
}

SetupMetadata metadata(SetupVariant v) {
  switch (v) {
    case SetupVariant::Franson: return {ModelClass::emission_time_realism(), false};
    case SetupVariant::PolarizationEntangled: return {ModelClass::plain_local_realism(), true};
    case SetupVariant::SwitchedMirrors: return {ModelClass::plain_local_realism(), true};
    case SetupVariant::CrossCoupled: return {ModelClass::path_realism(), true};
  }
  throw std::invalid_argument("unknown setup variant");
}

SetupTrial sample_setup_trial(SetupVariant v, Setting phi, Setting psi, Visibility vis, const RandomSource& rs,
                              std::uint64_t trial) {
  SetupTrial t;
  if (v == SetupVariant::Franson) {
    const auto e = sample_franson_event(phi, psi, vis, rs, trial);
    t.x1 = e.x1;
    t.x2 = e.x2;
    t.d1 = e.d1;
    t.d2 = e.d2;
    return t;
  }
  const std::uint64_t base = 4 * trial;
  t.d1 = t.d2 = rs.uniform(base) < 0.5 ? Delay::Early : Delay::Late;
  if (v == SetupVariant::CrossCoupled) t.routed_together = rs.uniform(base + 1) < 0.5;
  t.x1 = rs.uniform(base + 2) < 0.5 ? Outcome::Plus : Outcome::Minus;
  const double p_equal = t.coincident() ? 0.5 * (1.0 + franson_correlation(phi, psi, vis)) : 0.5;
  const bool equal = rs.uniform(base + 3) < p_equal;
  t.x2 = equal ? t.x1 : (t.x1 == Outcome::Plus ? Outcome::Minus : Outcome::Plus);
  return t;
}

SetupResult simulate_setup(SetupVariant v, const SettingsChain& chain, Visibility vis, std::uint64_t trials_per_pair,
                           const RandomSource& rs) {
  if (trials_per_pair == 0) throw std::invalid_argument("simulate_setup needs at least one trial");
  SetupResult result;
  result.variant = v;
  CorrelationAccumulator acc;
  std::uint64_t trial = 0;
  for (const auto& term : chain.term_order()) {
    PairCounts pc;
    pc.site1 = chain.site1_of(term);
    pc.site2 = chain.site2_of(term);
    for (std::uint64_t k = 0; k < trials_per_pair; ++k, ++trial) {
      const SetupTrial t = sample_setup_trial(v, pc.site1, pc.site2, vis, rs, trial);
      ++pc.trials;
      if (t.d1 == Delay::Early) ++pc.early;
      if (t.coincident()) {
        ++pc.coincidences;
        acc.add(pc.site1, pc.site2, value(t.x1) * value(t.x2));
      }
      // A routed-together pair lands at one site only; which one is decided by the delay bit.
      const bool at1 = !t.routed_together || t.d1 == Delay::Early;
      const bool at2 = !t.routed_together || t.d1 == Delay::Late;
      if (at1) {
        ++pc.site1_present;
        if (t.x1 == Outcome::Plus) ++pc.site1_plus;
      }
      if (at2) {
        ++pc.site2_present;
        if (t.x2 == Outcome::Plus) ++pc.site2_plus;
      }
    }
    result.trials += pc.trials;
    result.coincidences += pc.coincidences;
    result.pairs.push_back(pc);
  }
  result.table = acc.table();
  result.coincidence_fraction = static_cast<double>(result.coincidences) / static_cast<double>(result.trials);
  result.verdict = evaluate(result.table, chain, metadata(v).model);
  return result;
}

nlohmann::json to_json(const SetupResult& r) {
  const auto md = metadata(r.variant);
  return {{"variant", to_string(r.variant)},
          {"model_class", md.model.name()},
          {"path_is_epr_element_of_reality", md.path_is_epr_real},
          {"trials", r.trials},
          {"coincidences", r.coincidences},
          {"coincidence_fraction", r.coincidence_fraction},
          {"correlations", to_json(r.table)},
          {"verdict", to_json(r.verdict)}};
}

}  // namespace franson
