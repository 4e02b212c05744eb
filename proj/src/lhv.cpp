#include "franson/lhv.hpp"

#include <cmath>

namespace franson {

LocalResponse aklz_site1(Setting phi, const HiddenVariable& lambda) {
  const double c = std::cos(lambda.theta + phi.phase());
  const double half_h = 0.5 * (kPi / 4.0) * std::abs(c);
  const double r = lambda.r;
  const bool early = r < half_h || (r >= 0.5 && r < 1.0 - half_h);
  return {outcome_from_sign(c), early ? Delay::Early : Delay::Late, true};
}

LocalResponse aklz_site2(Setting psi, const HiddenVariable& lambda) {
  const double c = std::cos(lambda.theta - psi.phase());
  return {outcome_from_sign(c), lambda.r < 0.5 ? Delay::Early : Delay::Late, true};
}

LocalStrategy aklz_strategy() { return {"aklz", aklz_site1, aklz_site2}; }

LocalStrategy threshold_detection_strategy(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("detection threshold must lie in [0, 1]");
  auto site1 = [threshold](Setting phi, const HiddenVariable& l) {
    const double c = std::cos(l.theta + phi.phase());
    return LocalResponse{outcome_from_sign(c), Delay::Early, std::abs(c) >= threshold};
  };
  auto site2 = [threshold](Setting psi, const HiddenVariable& l) {
    const double c = std::cos(l.theta - psi.phase());
    return LocalResponse{outcome_from_sign(c), Delay::Early, std::abs(c) >= threshold};
  };
  return {"threshold-detection", site1, site2};
}

TrialOutcome run_lhv_trial(const LocalStrategy& strategy, Setting phi, Setting psi, const HiddenVariable& lambda) {
  return {strategy.site1(phi, lambda), strategy.site2(psi, lambda)};
}

HiddenVariable sample_hidden_variable(const RandomSource& rs, std::uint64_t trial) {
  return {reduce_angle(kTwoPi * rs.uniform(2 * trial)), rs.uniform(2 * trial + 1)};
}

}  // namespace franson
