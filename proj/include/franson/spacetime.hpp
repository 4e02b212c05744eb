// Causal-ordering premises of the path-realism and emission-time arguments,
// in a one-dimensional light-travel model (c = 1, everything in ns).
#pragma once

#include <string>
#include <vector>

namespace franson {

struct StationGeometry {
  double path_difference_ns = 100.0;          ///< ΔT
  double modulator_to_detector_ns = 20.0;     ///< phase delay → detector travel time
  double setting_switch_period_ns = 50.0;     ///< may be +infinity for static settings
  double detector_latency_ns = 0.0;           ///< optional additive response latency

  /// Throws std::invalid_argument unless the three delays are > 0 and latency >= 0.
  void validate() const;
};

struct PremiseCheck {
  bool satisfied = false;
  double margin_ns = 0.0;
};

/// Satisfied iff ΔT > modulator→detector (+ latency) and a fresh setting is
/// guaranteed between early detection and late-setting readoff:
/// margin = ΔT - modulator→detector - latency - switch period > 0.
PremiseCheck check_emission_time_premise(const StationGeometry& g);

enum class StationEvent { EarlySettingReadoff, EarlyDetection, LateSettingChoice, LateSettingReadoff, LateDetection };

const char* to_string(StationEvent e);

struct TimedEvent {
  StationEvent event;
  double time_ns;
};

/// Station timeline with the early photon passing the phase delay at t = 0.
/// The late-setting choice is the latest switch instant guaranteed before the
/// late readoff, ΔT - switch period.
struct EventOrder {
  std::vector<TimedEvent> events;  ///< sorted by time, stable on ties

  /// True iff b lies strictly inside the forward light cone of a. All events
  /// share one station, so this reduces to t_a < t_b.
  bool precedes(StationEvent a, StationEvent b) const;
  double time_of(StationEvent e) const;
  /// The emission-time premise in event form: late-setting choice after early detection.
  bool late_choice_after_early_detection() const;
};

EventOrder classify_event_order(const StationGeometry& g);

}  // namespace franson
