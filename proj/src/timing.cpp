#include "franson/timing.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "franson/random.hpp"

namespace franson {

void InterferometerTiming::validate() const {
  if (!(short_arm_delay_ns >= 0.0)) throw std::invalid_argument("short arm delay must be >= 0");
  if (!(path_difference_ns > 0.0)) throw std::invalid_argument("path difference delay must be > 0");
  if (!(coincidence_window_ns > 0.0)) throw std::invalid_argument("coincidence window must be > 0");
  if (!(coincidence_window_ns < path_difference_ns)) {
    throw std::invalid_argument("coincidence window must be smaller than the path difference delay");
  }
}

std::vector<DetectionEvent> emit_events(std::span<const TrialResponses> trials, std::span<const double> emission_times,
                                        const InterferometerTiming& timing) {
  timing.validate();
  if (trials.size() != emission_times.size()) throw std::invalid_argument("one emission time per trial required");
  for (std::size_t i = 1; i < emission_times.size(); ++i) {
    if (!(emission_times[i] - emission_times[i - 1] > 2.0 * timing.path_difference_ns)) {
      throw std::invalid_argument("emission gap at trial " + std::to_string(i) + " is not larger than 2*dT");
    }
  }

  std::vector<DetectionEvent> events;
  events.reserve(2 * trials.size());
  auto stamp = [&](double t0, Delay d) {
    return t0 + timing.short_arm_delay_ns + (d == Delay::Late ? timing.path_difference_ns : 0.0);
  };
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const auto& tr = trials[i];
    const std::size_t first = events.size();
    if (tr.site1.detected) {
      events.push_back({1, tr.trial, stamp(emission_times[i], tr.site1.delay), tr.site1.outcome, tr.setting1});
    }
    if (tr.site2.detected) {
      events.push_back({2, tr.trial, stamp(emission_times[i], tr.site2.delay), tr.site2.outcome, tr.setting2});
    }
    if (events.size() - first == 2 && events[first + 1].timestamp_ns < events[first].timestamp_ns) {
      std::swap(events[first], events[first + 1]);
    }
  }
  return events;
}

namespace {

EfficiencyEntry& entry_for(std::vector<EfficiencyEntry>& entries, int site, Setting s) {
  for (auto& e : entries) {
    if (e.site == site && e.setting == s) return e;
  }
  entries.push_back({site, s, 0, 0});
  return entries.back();
}

}  // namespace

PostselectionResult postselect(std::span<const DetectionEvent> events, const InterferometerTiming& timing) {
  timing.validate();
  if (!std::is_sorted(events.begin(), events.end(),
                      [](const auto& a, const auto& b) { return a.timestamp_ns < b.timestamp_ns; })) {
    throw std::invalid_argument("postselect requires events sorted by timestamp");
  }

  PostselectionResult result;
  std::vector<EfficiencyEntry>& entries = result.efficiency.entries;
  // Latest unpaired event per site. Anything older than the latest cannot be
  // within the window of a later event on the other site.
  const DetectionEvent* pending[2] = {nullptr, nullptr};
  std::vector<bool> paired(events.size(), false);

  for (std::size_t i = 0; i < events.size(); ++i) {
    const auto& e = events[i];
    if (e.site != 1 && e.site != 2) throw std::invalid_argument("event site must be 1 or 2");
    const int self = e.site - 1, other = 1 - self;
    const DetectionEvent* p = pending[other];
    if (p != nullptr && std::abs(e.timestamp_ns - p->timestamp_ns) < timing.coincidence_window_ns) {
      paired[i] = true;
      paired[static_cast<std::size_t>(p - events.data())] = true;
      result.pairs.push_back(e.site == 1 ? CoincidentPair{e, *p} : CoincidentPair{*p, e});
      pending[other] = nullptr;
      pending[self] = nullptr;
    } else {
      pending[self] = &e;
    }
  }

  for (std::size_t i = 0; i < events.size(); ++i) {
    auto& entry = entry_for(entries, events[i].site, events[i].setting);
    ++entry.detections;
    if (paired[i]) ++entry.coincidences;
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.site != b.site ? a.site < b.site : a.setting.phase() < b.setting.phase();
  });
  if (!entries.empty()) {
    result.efficiency.eta = 1.0;
    for (const auto& e : entries) result.efficiency.eta = std::min(result.efficiency.eta, e.efficiency());
  }
  return result;
}

void write_events_csv(std::ostream& out, std::span<const DetectionEvent> events) {
  out << "site,trial,timestamp_ns,outcome,setting_rad\n";
  out << std::setprecision(17);
  for (const auto& e : events) {
    out << e.site << ',' << e.trial << ',' << e.timestamp_ns << ',' << value(e.outcome) << ',' << e.setting.phase()
        << '\n';
  }
}

std::vector<DetectionEvent> read_events_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "site,trial,timestamp_ns,outcome,setting_rad") {
    throw std::invalid_argument("events CSV: missing or unexpected header");
  }
  std::vector<DetectionEvent> events;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    DetectionEvent e;
    int outcome = 0;
    double phase = 0.0;
    char c1, c2, c3, c4;
    if (!(ls >> e.site >> c1 >> e.trial >> c2 >> e.timestamp_ns >> c3 >> outcome >> c4 >> phase) || c1 != ',' ||
        c2 != ',' || c3 != ',' || c4 != ',' || (outcome != 1 && outcome != -1) || (e.site != 1 && e.site != 2)) {
      throw std::invalid_argument("events CSV: malformed line " + std::to_string(lineno));
    }
    e.outcome = static_cast<Outcome>(outcome);
    e.setting = Setting(phase);
    events.push_back(e);
  }
  return events;
}

std::vector<double> random_emission_times(std::size_t count, const InterferometerTiming& timing,
                                          const RandomSource& rs) {
  std::vector<double> times(count);
  double t = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    times[i] = t;
    t += 2.0 * timing.path_difference_ns * (1.0 + rs.uniform(i)) + 1.0;
  }
  return times;
}

}  // namespace franson
