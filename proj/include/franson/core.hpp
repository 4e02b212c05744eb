// Shared domain types for the energy-time Bell test simulator.
#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace franson {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAngleTolerance = 1e-12;

/// Thrown when an enumeration or optimization would exceed its configured size.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reduces an angle into [0, 2π).
double reduce_angle(double radians);

/// A measurement phase setting, always stored reduced modulo 2π.
class Setting {
 public:
  constexpr Setting() = default;
  explicit Setting(double radians) : phase_(reduce_angle(radians)) {}

  double phase() const { return phase_; }

  /// Circular comparison up to kAngleTolerance, so 2π - 1e-13 equals 0.
  friend bool operator==(Setting a, Setting b);

 private:
  double phase_ = 0.0;
};

enum class Outcome : int { Plus = 1, Minus = -1 };

constexpr int value(Outcome o) { return static_cast<int>(o); }
constexpr Outcome outcome_from_sign(double x) { return x >= 0.0 ? Outcome::Plus : Outcome::Minus; }

enum class Delay : std::uint8_t { Early, Late };

const char* to_string(Delay d);

/// Shared local hidden variable λ = (θ, r), θ in [0, 2π), r in [0, 1).
struct HiddenVariable {
  double theta = 0.0;
  double r = 0.0;

  /// Validating constructor; throws std::invalid_argument when out of range.
  static HiddenVariable make(double theta, double r);
};

/// One term of a chained Bell statistic: E(site1[site1_index] , site2[site2_index]) with a sign.
struct ChainTerm {
  std::size_t site1_index = 0;
  std::size_t site2_index = 0;
  int sign = 1;

  friend bool operator==(const ChainTerm&, const ChainTerm&) = default;
};

/// The settings and term order of a 2N-term chained Bell statistic.
///
/// Terms are grouped in consecutive pairs, each pair entering the statistic
/// inside an absolute value. Exactly one term carries a minus sign.
class SettingsChain {
 public:
  /// Validates the chain invariants; throws std::invalid_argument on violation.
  SettingsChain(std::vector<Setting> site1, std::vector<Setting> site2, std::vector<ChainTerm> order);

  /// Standard term order over the given settings:
  /// (0,0,+) (0,1,+) (1,1,+) (1,2,+) ... (N-1,N-1,+) (N-1,0,-).
  static SettingsChain with_settings(std::vector<Setting> site1, std::vector<Setting> site2);

  int terms() const { return static_cast<int>(order_.size()); }
  std::size_t settings_per_site() const { return site1_.size(); }
  const std::vector<Setting>& site1_settings() const { return site1_; }
  const std::vector<Setting>& site2_settings() const { return site2_; }
  const std::vector<ChainTerm>& term_order() const { return order_; }

  Setting site1_of(const ChainTerm& t) const { return site1_[t.site1_index]; }
  Setting site2_of(const ChainTerm& t) const { return site2_[t.site2_index]; }

 private:
  std::vector<Setting> site1_;
  std::vector<Setting> site2_;
  std::vector<ChainTerm> order_;
};

/// Throws std::invalid_argument unless terms is even and at least 4.
void require_chain_terms(int terms);

/// Settings π/terms apart for which every term of the chained statistic evaluates
/// to cos(π/terms) under the correlation cos(φ + ψ).
///
/// Site 1 sits at (2k+1)π/terms and site 2 at -2kπ/terms, k = 0..N-1. The site-2
/// phases are negated relative to the usual difference-angle layout because the
/// interferometric correlation depends on the phase sum.
SettingsChain chain_settings(int terms);

}  // namespace franson
