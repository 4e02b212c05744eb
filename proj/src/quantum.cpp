#include "franson/quantum.hpp"

#include <cmath>
#include <string>

namespace franson {

Visibility::Visibility(double v) : v_(v) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("visibility must lie in [0, 1], got " + std::to_string(v));
}

double singlet_correlation(Setting phi, Setting psi) { return -std::cos(phi.phase() - psi.phase()); }

double franson_correlation(Setting phi, Setting psi, Visibility vis) {
  return vis.value() * std::cos(phi.phase() + psi.phase());
}

FransonJointDistribution franson_joint(Setting phi, Setting psi, Visibility vis) {
  FransonJointDistribution d;
  const double c = franson_correlation(phi, psi, vis);
  for (auto p : {DelayPattern::EE, DelayPattern::EL, DelayPattern::LE, DelayPattern::LL}) {
    for (auto x1 : {Outcome::Plus, Outcome::Minus}) {
      for (auto x2 : {Outcome::Plus, Outcome::Minus}) {
        const double conditional = is_coincident(p) ? (1.0 + value(x1) * value(x2) * c) / 4.0 : 0.25;
        d.cells_[FransonJointDistribution::index(p, x1, x2)] = 0.25 * conditional;
      }
    }
  }
  return d;
}

double FransonJointDistribution::pattern_probability(DelayPattern p) const {
  double s = 0.0;
  for (auto x1 : {Outcome::Plus, Outcome::Minus})
    for (auto x2 : {Outcome::Plus, Outcome::Minus}) s += probability(p, x1, x2);
  return s;
}

double FransonJointDistribution::coincidence_probability() const {
  return pattern_probability(DelayPattern::EE) + pattern_probability(DelayPattern::LL);
}

double FransonJointDistribution::conditional_correlation() const {
  double s = 0.0;
  for (auto p : {DelayPattern::EE, DelayPattern::LL})
    for (auto x1 : {Outcome::Plus, Outcome::Minus})
      for (auto x2 : {Outcome::Plus, Outcome::Minus}) s += value(x1) * value(x2) * probability(p, x1, x2);
  return s / coincidence_probability();
}

double FransonJointDistribution::site1_plus_probability() const {
  double s = 0.0;
  for (auto p : {DelayPattern::EE, DelayPattern::EL, DelayPattern::LE, DelayPattern::LL})
    for (auto x2 : {Outcome::Plus, Outcome::Minus}) s += probability(p, Outcome::Plus, x2);
  return s;
}

double FransonJointDistribution::site2_plus_probability() const {
  double s = 0.0;
  for (auto p : {DelayPattern::EE, DelayPattern::EL, DelayPattern::LE, DelayPattern::LL})
    for (auto x1 : {Outcome::Plus, Outcome::Minus}) s += probability(p, x1, Outcome::Plus);
  return s;
}

double FransonJointDistribution::total() const {
  double s = 0.0;
  for (double c : cells_) s += c;
  return s;
}

double chained_quantum_value(int terms) {
  require_chain_terms(terms);
  return terms * std::cos(kPi / terms);
}

FransonEvent sample_franson_event(Setting phi, Setting psi, Visibility vis, const RandomSource& rs,
                                  std::uint64_t trial) {
  const std::uint64_t base = 4 * trial;
  FransonEvent e;
  e.d1 = rs.uniform(base) < 0.5 ? Delay::Early : Delay::Late;
  e.d2 = rs.uniform(base + 1) < 0.5 ? Delay::Early : Delay::Late;
  e.x1 = rs.uniform(base + 2) < 0.5 ? Outcome::Plus : Outcome::Minus;
  const double p_equal = e.coincident() ? 0.5 * (1.0 + franson_correlation(phi, psi, vis)) : 0.5;
  const bool equal = rs.uniform(base + 3) < p_equal;
  e.x2 = equal ? e.x1 : (e.x1 == Outcome::Plus ? Outcome::Minus : Outcome::Plus);
  return e;
}

}  // namespace franson
