// Closed-form quantum predictions for the Bohm-Bell and Franson setups.
#pragma once

#include <array>
#include <cstdint>

#include "franson/core.hpp"
#include "franson/random.hpp"

namespace franson {

/// Interference visibility v in [0, 1].
class Visibility {
 public:
  explicit Visibility(double v = 1.0);
  double value() const { return v_; }

 private:
  double v_;
};

/// Spin-singlet correlation -cos(φ - ψ).
double singlet_correlation(Setting phi, Setting psi);

/// Coincidence-conditioned Franson correlation v·cos(φ + ψ).
double franson_correlation(Setting phi, Setting psi, Visibility vis);

enum class DelayPattern : std::uint8_t { EE = 0, EL = 1, LE = 2, LL = 3 };

constexpr DelayPattern pattern_of(Delay d1, Delay d2) {
  return static_cast<DelayPattern>((d1 == Delay::Late ? 2 : 0) + (d2 == Delay::Late ? 1 : 0));
}
constexpr bool is_coincident(DelayPattern p) { return p == DelayPattern::EE || p == DelayPattern::LL; }

/// Joint law of (delay pattern, X1, X2) for one emitted pair.
class FransonJointDistribution {
 public:
  double probability(DelayPattern p, Outcome x1, Outcome x2) const { return cells_[index(p, x1, x2)]; }
  double pattern_probability(DelayPattern p) const;
  double coincidence_probability() const;
  /// E[X1·X2 | EE or LL].
  double conditional_correlation() const;
  double site1_plus_probability() const;
  double site2_plus_probability() const;
  double total() const;

  static constexpr std::size_t index(DelayPattern p, Outcome x1, Outcome x2) {
    return static_cast<std::size_t>(p) * 4 + (x1 == Outcome::Plus ? 0 : 2) + (x2 == Outcome::Plus ? 0 : 1);
  }

 private:
  friend FransonJointDistribution franson_joint(Setting, Setting, Visibility);
  std::array<double, 16> cells_{};
};

/// Each delay pattern has mass 1/4. Within EE and LL the outcomes interfere,
/// P(x1, x2 | pattern) = (1 + x1·x2·v·cos(φ+ψ))/4; within EL and LE they are
/// independent and unbiased.
FransonJointDistribution franson_joint(Setting phi, Setting psi, Visibility vis);

/// terms·cos(π/terms), the quantum value of the 2N-term chained statistic.
double chained_quantum_value(int terms);

struct FransonEvent {
  Outcome x1 = Outcome::Plus;
  Delay d1 = Delay::Early;
  Outcome x2 = Outcome::Plus;
  Delay d2 = Delay::Early;

  bool coincident() const { return d1 == d2; }
};

/// Exact sampler of franson_joint. Uses draws [4·trial, 4·trial + 4) of rs.
FransonEvent sample_franson_event(Setting phi, Setting psi, Visibility vis, const RandomSource& rs,
                                  std::uint64_t trial);

}  // namespace franson
