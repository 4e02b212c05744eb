#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "franson/cli.hpp"

namespace {

struct Flags {
  std::optional<std::uint64_t> seed, trials;
  std::optional<int> terms;
  std::optional<double> visibility, eta;
  std::optional<std::string> variant, model_class, config, out, source, preset;
  std::optional<int> restarts, random_chains, max_iterations;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--seed", f.seed, "Random seed");
  app->add_option("--trials", f.trials, "Runs per setting pair");
  app->add_option("--terms", f.terms, "Chain length (even, >= 4)");
  app->add_option("--visibility", f.visibility, "Interference visibility in [0, 1]");
  app->add_option("--variant", f.variant, "franson | polarization-entangled | switched-mirrors | cross-coupled");
  app->add_option("--model-class", f.model_class, "PlainLocalRealism | Inefficiency | Delays | PathRealism | "
                                                  "EmissionTimeRealism | OutcomesOnly");
  app->add_option("--eta", f.eta, "Efficiency parameter for Inefficiency and Delays");
  app->add_option("--config", f.config, "JSON run configuration");
  app->add_option("--out", f.out, "Output directory");
}

nlohmann::json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw franson::ConfigError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw franson::ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-test simulator for energy-time entangled photon pairs"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "Sample a source through the timing and postselection pipeline");
  auto* bounds = app.add_subcommand("bounds", "Closed-form bounds per model class");
  auto* visibility = app.add_subcommand("visibility", "Critical visibility and statistic-versus-visibility data");
  auto* verify = app.add_subcommand("verify-bounds", "Search strategy spaces for the largest statistic");
  auto* geometry = app.add_subcommand("geometry", "Check the station geometry premise");
  auto* report = app.add_subcommand("report", "Run a preset or a config file");
  for (auto* s : {simulate, bounds, visibility, verify, geometry, report}) add_common(s, f);
  simulate->add_option("--source", f.source, "quantum | aklz | setup");
  simulate->add_option("--preset", f.preset, "simulate | aklz-demo | chained6");
  verify->add_option("--restarts", f.restarts, "Optimizer restarts per chain");
  verify->add_option("--random-chains", f.random_chains, "Random-phase chains besides the standard one");
  verify->add_option("--max-iterations", f.max_iterations, "Ascent iterations per restart");
  report->add_option("--preset", f.preset, "table1 | thresholds | aklz-demo | chained6 | setups | verify-bounds | "
                                           "geometry | visibility | bounds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    nlohmann::json doc = f.config ? load(*f.config) : nlohmann::json::object();
    if (!doc.is_object()) throw franson::ConfigError("config must be a JSON object");
    if (simulate->parsed()) {
      doc["scenario"] = f.preset.value_or("simulate");
      if (doc["scenario"] != "simulate" && doc["scenario"] != "aklz-demo" && doc["scenario"] != "chained6") {
        throw franson::ConfigError("simulate accepts the presets simulate, aklz-demo and chained6");
      }
    } else if (bounds->parsed()) {
      doc["scenario"] = "bounds";
    } else if (visibility->parsed()) {
      doc["scenario"] = "visibility";
    } else if (verify->parsed()) {
      doc["scenario"] = "verify-bounds";
    } else if (geometry->parsed()) {
      doc["scenario"] = "geometry";
    } else if (f.preset) {
      doc["scenario"] = *f.preset;
    } else if (!f.config) {
      throw franson::ConfigError("report needs --preset or --config");
    }
    if (f.seed) doc["seed"] = *f.seed;
    if (f.trials) doc["trials"] = *f.trials;
    if (f.terms) doc["terms"] = *f.terms;
    if (f.visibility) doc["visibility"] = *f.visibility;
    if (f.variant) doc["variant"] = *f.variant;
    if (f.model_class) doc["model_class"] = *f.model_class;
    if (f.eta) doc["eta"] = *f.eta;
    if (f.out) doc["out_dir"] = *f.out;
    if (f.source) doc["source"] = *f.source;
    if (f.restarts) doc["verify"]["restarts"] = *f.restarts;
    if (f.random_chains) doc["verify"]["random_chains"] = *f.random_chains;
    if (f.max_iterations) doc["verify"]["max_iterations"] = *f.max_iterations;

    const franson::RunConfig config = franson::parse_config(doc);
    const int status = franson::run(config, std::cerr);
    if (status == 0) std::cout << config.out_dir << "/report.json\n";
    return status;
  } catch (const franson::ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  }
}
