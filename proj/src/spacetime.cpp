#include "franson/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace franson {

void StationGeometry::validate() const {
  if (!(path_difference_ns > 0.0)) throw std::invalid_argument("path difference delay must be > 0");
  if (!(modulator_to_detector_ns > 0.0)) throw std::invalid_argument("modulator-to-detector delay must be > 0");
  if (!(setting_switch_period_ns > 0.0)) throw std::invalid_argument("setting switch period must be > 0");
  if (!(detector_latency_ns >= 0.0) || std::isinf(detector_latency_ns)) {
    throw std::invalid_argument("detector latency must be finite and >= 0");
  }
}

PremiseCheck check_emission_time_premise(const StationGeometry& g) {
  g.validate();
  const double detection = g.modulator_to_detector_ns + g.detector_latency_ns;
  PremiseCheck c;
  c.margin_ns = g.path_difference_ns - detection - g.setting_switch_period_ns;
  c.satisfied = g.path_difference_ns > detection && g.setting_switch_period_ns < g.path_difference_ns - detection;
  return c;
}

const char* to_string(StationEvent e) {
  switch (e) {
    case StationEvent::EarlySettingReadoff: return "early-setting-readoff";
    case StationEvent::EarlyDetection: return "early-detection";
    case StationEvent::LateSettingChoice: return "late-setting-choice";
    case StationEvent::LateSettingReadoff: return "late-setting-readoff";
    case StationEvent::LateDetection: return "late-detection";
  }
  return "unknown";
}

EventOrder classify_event_order(const StationGeometry& g) {
  g.validate();
  const double detection = g.modulator_to_detector_ns + g.detector_latency_ns;
  EventOrder o;
  o.events = {
      {StationEvent::EarlySettingReadoff, 0.0},
      {StationEvent::EarlyDetection, detection},
      {StationEvent::LateSettingChoice, g.path_difference_ns - g.setting_switch_period_ns},
      {StationEvent::LateSettingReadoff, g.path_difference_ns},
      {StationEvent::LateDetection, g.path_difference_ns + detection},
  };
  std::stable_sort(o.events.begin(), o.events.end(),
                   [](const TimedEvent& a, const TimedEvent& b) { return a.time_ns < b.time_ns; });
  return o;
}

double EventOrder::time_of(StationEvent e) const {
  for (const auto& te : events) {
    if (te.event == e) return te.time_ns;
  }
  throw std::invalid_argument("event not in timeline");
}

bool EventOrder::precedes(StationEvent a, StationEvent b) const { return time_of(a) < time_of(b); }

bool EventOrder::late_choice_after_early_detection() const {
  return precedes(StationEvent::EarlyDetection, StationEvent::LateSettingChoice);
}

}  // namespace franson
