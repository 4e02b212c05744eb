// Batch runner: JSON run configuration, scenario presets, and report files.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "franson/setups.hpp"
#include "franson/spacetime.hpp"
#include "franson/timing.hpp"

namespace franson {

/// Invalid configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct VerifyOptions {
  int restarts = 64;
  int max_iterations = 300;
  int random_chains = 0;  ///< extra random-phase chains besides the standard one
};

struct RunConfig {
  std::string scenario = "table1";
  std::string source = "quantum";  ///< quantum | aklz | setup
  std::optional<SetupVariant> variant;
  std::optional<std::string> model_class;
  std::optional<double> eta;
  int terms = 4;
  double visibility = 1.0;
  std::uint64_t trials = 100000;  ///< per setting pair
  std::uint64_t seed = 1;
  InterferometerTiming timing;
  StationGeometry geometry;
  VerifyOptions verify;
  std::string out_dir = "out";
};

/// Names accepted for "scenario".
const std::vector<std::string>& scenario_names();

/// Preset configurations: table1, thresholds, aklz-demo, chained6, setups,
/// verify-bounds, geometry, visibility, bounds. Throws ConfigError for unknown names.
RunConfig preset(const std::string& name);

/// Validates and parses a config document. Missing keys keep the defaults of
/// the named scenario's preset (or RunConfig defaults). Unknown keys are errors.
RunConfig parse_config(const nlohmann::json& doc);

/// Range and consistency checks; throws ConfigError.
void validate(const RunConfig& c);

nlohmann::json to_json(const RunConfig& c);

struct RunOutput {
  nlohmann::json report;
  /// Extra files (name, content) written next to report.json: CSV tables and plot data.
  std::vector<std::pair<std::string, std::string>> files;
};

/// Runs the scenario without touching the filesystem.
RunOutput execute(const RunConfig& c);

/// Runs the scenario and writes report.json plus the extra files into c.out_dir.
/// Returns 0 on success (whatever the verdicts), 2 for an invalid config, 3 when
/// a resource limit is hit, 1 for other failures. Diagnostics go to `err`.
int run(const RunConfig& c, std::ostream& err);

}  // namespace franson
