// Time-tagged detection events and coincidence-window postselection.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "franson/core.hpp"
#include "franson/lhv.hpp"

namespace franson {

/// Delays in nanoseconds with c = 1, so path lengths are expressed as travel times.
struct InterferometerTiming {
  double short_arm_delay_ns = 10.0;
  double path_difference_ns = 100.0;  ///< ΔT, extra delay of the long arm
  double coincidence_window_ns = 10.0;

  /// Throws std::invalid_argument unless delays are non-negative/positive and W < ΔT.
  void validate() const;
};

struct DetectionEvent {
  int site = 1;
  std::uint64_t trial = 0;
  double timestamp_ns = 0.0;
  Outcome outcome = Outcome::Plus;
  Setting setting;

  friend bool operator==(const DetectionEvent&, const DetectionEvent&) = default;
};

/// Both sites' responses for one emitted pair, with the settings in effect.
struct TrialResponses {
  std::uint64_t trial = 0;
  Setting setting1;
  Setting setting2;
  LocalResponse site1;
  LocalResponse site2;
};

/// One event per detected response, timestamp = emission + short arm (+ ΔT if Late).
///
/// Emission times must increase with gaps larger than 2·ΔT so that no
/// detection can be paired across trials; otherwise std::invalid_argument.
/// Output is ordered by timestamp, site 1 first on ties.
std::vector<DetectionEvent> emit_events(std::span<const TrialResponses> trials, std::span<const double> emission_times,
                                        const InterferometerTiming& timing);

struct CoincidentPair {
  DetectionEvent site1;
  DetectionEvent site2;
};

struct EfficiencyEntry {
  int site = 1;
  Setting setting;
  std::uint64_t detections = 0;
  std::uint64_t coincidences = 0;

  double efficiency() const { return detections == 0 ? 0.0 : static_cast<double>(coincidences) / detections; }
};

/// P(coincidence | local detection) per site and setting; eta is the minimum.
struct EfficiencyReport {
  std::vector<EfficiencyEntry> entries;
  double eta = 0.0;
};

struct PostselectionResult {
  std::vector<CoincidentPair> pairs;
  EfficiencyReport efficiency;
};

/// Pairs site-1 and site-2 events with |t1 - t2| < W, using timestamps only.
/// Events must be sorted by timestamp (std::invalid_argument otherwise).
PostselectionResult postselect(std::span<const DetectionEvent> events, const InterferometerTiming& timing);

/// CSV with header site,trial,timestamp_ns,outcome,setting_rad. Reals use
/// 17 significant digits so a read-back reproduces every event exactly.
void write_events_csv(std::ostream& out, std::span<const DetectionEvent> events);
std::vector<DetectionEvent> read_events_csv(std::istream& in);

/// Emission times t_0 = 0, t_{i+1} = t_i + 2ΔT·(1 + u_i) + 1 ns with u_i uniform; satisfies the gap precondition.
std::vector<double> random_emission_times(std::size_t count, const InterferometerTiming& timing, const RandomSource& rs);

}  // namespace franson
