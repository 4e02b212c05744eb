// Local hidden variable strategies, including the postselection model that
// reproduces the coincident Franson correlation cos(φ + ψ).
#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "franson/core.hpp"
#include "franson/random.hpp"

namespace franson {

/// A site's reaction to one run. When detected is false, outcome and delay carry no meaning.
struct LocalResponse {
  Outcome outcome = Outcome::Plus;
  Delay delay = Delay::Early;
  bool detected = true;

  friend bool operator==(const LocalResponse& a, const LocalResponse& b) {
    if (a.detected != b.detected) return false;
    return !a.detected || (a.outcome == b.outcome && a.delay == b.delay);
  }
};

/// Response function of one site. It sees only its own setting, which is how
/// locality is enforced: there is no way to pass it the remote setting.
using SiteResponse = std::function<LocalResponse(Setting, const HiddenVariable&)>;

struct LocalStrategy {
  std::string name;
  SiteResponse site1;
  SiteResponse site2;
};

/// Site 1 of the postselection model. With u = θ + φ and h = (π/4)|cos u|:
/// outcome sign(cos u), Early iff r ∈ [0, h/2) ∪ [1/2, 1 - h/2).
LocalResponse aklz_site1(Setting phi, const HiddenVariable& lambda);

/// Site 2 of the postselection model: outcome sign(cos(θ - ψ)), Early iff r < 1/2.
LocalResponse aklz_site2(Setting psi, const HiddenVariable& lambda);

LocalStrategy aklz_strategy();

/// Deterministic sign model with a detection threshold: site k outputs
/// sign(cos(θ ± setting)) and detects only when |cos(θ ± setting)| >= threshold.
/// No delays; every detection is Early.
LocalStrategy threshold_detection_strategy(double threshold);

struct TrialOutcome {
  LocalResponse site1;
  LocalResponse site2;

  bool coincident() const { return site1.detected && site2.detected && site1.delay == site2.delay; }
  int product() const { return value(site1.outcome) * value(site2.outcome); }
};

TrialOutcome run_lhv_trial(const LocalStrategy& strategy, Setting phi, Setting psi, const HiddenVariable& lambda);

/// λ uniform on [0, 2π) × [0, 1). Uses draws 2·trial and 2·trial + 1 of rs.
HiddenVariable sample_hidden_variable(const RandomSource& rs, std::uint64_t trial);

}  // namespace franson
