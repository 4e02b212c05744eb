// Search over local-realist strategy spaces for the largest chained statistic
// a model class allows, to check each closed-form bound numerically.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "franson/core.hpp"
#include "franson/inequalities.hpp"
#include "franson/lhv.hpp"
#include "franson/quadrature.hpp"
#include "franson/random.hpp"

namespace franson {

/// Deterministic strategy of one site over the chain's setting indices, as bitmasks.
///
/// For EmissionTimeRealism `outcome_minus` holds the outcomes reported on an
/// Early detection (under the early setting) and `late_outcome_minus` those
/// reported on a Late detection (under the late setting); `delay_late` is then
/// indexed by the early setting. For PathRealism all delay bits are equal.
struct SiteVertex {
  std::uint32_t outcome_minus = 0;
  std::uint32_t late_outcome_minus = 0;
  std::uint32_t delay_late = 0;
  std::uint32_t undetected = 0;

  Outcome outcome(std::size_t i) const { return (outcome_minus >> i) & 1U ? Outcome::Minus : Outcome::Plus; }
  Outcome late_outcome(std::size_t i) const {
    return (late_outcome_minus >> i) & 1U ? Outcome::Minus : Outcome::Plus;
  }
  Delay delay(std::size_t i) const { return (delay_late >> i) & 1U ? Delay::Late : Delay::Early; }
  bool detected(std::size_t i) const { return !((undetected >> i) & 1U); }

  friend bool operator==(const SiteVertex&, const SiteVertex&) = default;
};

struct DeterministicVertex {
  SiteVertex site1;
  SiteVertex site2;

  friend bool operator==(const DeterministicVertex&, const DeterministicVertex&) = default;
};

struct MixedStrategy {
  std::vector<DeterministicVertex> vertices;
  std::vector<double> weights;
};

/// A strategy-space game: model class, chain, and the linear constraints imposed on mixtures.
struct GameSpec {
  ModelClass model = ModelClass::plain_local_realism();
  SettingsChain chain = chain_settings(4);
  /// EmissionTimeRealism: P(EE | early settings a, b) and P(LL) pinned to this value
  /// for every (a, b). OutcomesOnly: optional, pins P(EE | a, b) and P(LL | a, b).
  std::optional<double> equal_delay_mass;
  /// Joint vertex count above which enumeration throws ResourceLimitError.
  std::uint64_t vertex_limit = std::uint64_t{1} << 22;

  /// Defaults per class: EmissionTimeRealism gets equal_delay_mass = 1/4.
  static GameSpec for_model(const ModelClass& mc, SettingsChain chain);
};

/// Number of deterministic strategies of one site (product of map cardinalities).
std::uint64_t site_vertex_count(const GameSpec& game);

std::vector<SiteVertex> enumerate_site_vertices(const GameSpec& game);

/// All joint deterministic strategies, site-1 major. Throws ResourceLimitError above game.vertex_limit.
std::vector<DeterministicVertex> enumerate_vertices(const GameSpec& game);

struct OptimizerBudget {
  int restarts = 64;
  int max_iterations = 300;
  std::uint64_t seed = 1;
};

struct MixtureEvaluation {
  double statistic = 0.0;
  std::vector<double> correlations;  ///< per chain term, in term order
  std::vector<double> coincidence;   ///< per chain term, selection mass
  double constraint_residual = 0.0;  ///< max |A w - b| including Σw = 1
  double min_weight = 0.0;
  bool feasible = false;
};

/// Evaluates a mixture in the game's ratio form and checks the game's constraints.
MixtureEvaluation evaluate_mixture(const GameSpec& game, const MixedStrategy& mix);

struct MaxResult {
  double value = 0.0;
  bool exact = false;  ///< true only for vertex maxima (PlainLocalRealism, PathRealism)
  MixedStrategy witness;
  double constraint_residual = 0.0;
  int restarts_run = 0;
  std::size_t vertex_classes = 0;  ///< distinct vertex feature vectors searched
};

/// Largest chained statistic over the game's strategy space.
///
/// Without postselection, or with a setting-independent selection mass, the
/// statistic is a convex function of a mixture whose maximum sits on a vertex,
/// so vertices are enumerated exactly. Otherwise the conditional correlations
/// are linear-fractional in the mixture weights and a multi-start projected
/// gradient ascent runs over the constrained simplex; the result is a lower
/// estimate of the supremum.
MaxResult max_statistic(const GameSpec& game, const OptimizerBudget& budget);

struct BoundReport {
  ModelClass model = ModelClass::plain_local_realism();
  int terms = 4;
  double bound = 0.0;
  double best_found = 0.0;
  double margin = 0.0;  ///< bound - best_found
  bool exact = false;
  bool tight = false;  ///< exact classes: max equals the bound
  bool pass = false;
  double constraint_residual = 0.0;
  int restarts = 0;
  std::string formalization;
  MixedStrategy witness;
};

/// PASS iff best-found <= bound + 1e-6, and for exact classes also max == bound within 1e-9.
BoundReport verify_bound(const GameSpec& game, const OptimizerBudget& budget);

/// The postselection model at the chain's settings as a mixture of
/// OutcomesOnly vertices, weights = quadrature measure of each λ region.
MixedStrategy aklz_witness(const SettingsChain& chain, const QuadratureGrid& grid = {});

/// A local strategy that draws a vertex from the mixture with r and answers by
/// its maps. Not available for EmissionTimeRealism vertices (two settings per run).
LocalStrategy strategy_from_mixture(const GameSpec& game, const MixedStrategy& mix);

/// Chain with uniformly random phases and the standard term order.
SettingsChain random_chain(int terms, const RandomSource& rs, std::uint64_t index);

nlohmann::json to_json(const GameSpec& game, const MixedStrategy& mix);
nlohmann::json to_json(const BoundReport& r);

}  // namespace franson
