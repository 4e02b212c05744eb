#include "franson/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "franson/experiment.hpp"
#include "franson/inequalities.hpp"
#include "franson/lhv.hpp"
#include "franson/quantum.hpp"
#include "franson/strategyopt.hpp"

namespace franson {

namespace {

// Stream ids of the independent randomness consumers of one run.
constexpr std::uint64_t kResponseStream = 0x100;
constexpr std::uint64_t kEmissionStream = 0x200;
constexpr std::uint64_t kSetupStream = 0x300;
constexpr std::uint64_t kChainStream = 0x400;

const std::vector<std::string> kScenarios = {"table1",   "thresholds",    "aklz-demo", "chained6", "setups",
                                             "verify-bounds", "geometry", "visibility", "bounds",   "simulate"};

bool is_simulation(const std::string& s) { return s == "simulate" || s == "aklz-demo" || s == "chained6"; }

std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Csv {
  std::ostringstream os;
  explicit Csv(const std::string& header) { os << header << '\n'; }
  template <typename... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    auto put = [&](const auto& c) {
      if (!first) os << ',';
      first = false;
      if constexpr (std::is_floating_point_v<std::decay_t<decltype(c)>>) {
        os << csv_number(c);
      } else {
        os << c;
      }
    };
    (put(cells), ...);
    os << '\n';
  }
  std::string str() const { return os.str(); }
};

std::string correlations_csv(const CorrelationTable& t) {
  Csv csv("site1_rad,site2_rad,estimate,count,standard_error");
  for (const auto& e : t.entries()) csv.row(e.site1.phase(), e.site2.phase(), e.estimate, e.count, e.standard_error);
  return csv.str();
}

// Verdict plot data: one row per chain term, x = term index.
std::string term_plot_csv(const CorrelationTable& t, const SettingsChain& chain) {
  Csv csv("x,y,yerr");
  int i = 0;
  for (const auto& term : chain.term_order()) {
    const auto* e = t.find(chain.site1_of(term), chain.site2_of(term));
    if (e != nullptr) csv.row(i, e->estimate, e->standard_error);
    ++i;
  }
  return csv.str();
}

ModelClass model_from_config(const RunConfig& c, const std::string& name, std::optional<double> measured_eta = {}) {
  const std::optional<double> eta = c.eta ? c.eta : measured_eta;
  return ModelClass::from_name(name, eta);
}

std::string default_model(const RunConfig& c) {
  if (c.model_class) return *c.model_class;
  if (c.source == "aklz") return "OutcomesOnly";
  return "EmissionTimeRealism";
}

nlohmann::json run_table1(RunOutput& out) {
  nlohmann::json rows = nlohmann::json::array();
  Csv plot("x,y,yerr");
  int argmin = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int terms : {4, 6, 8, 10, 12}) {
    const double cv = critical_visibility(terms);
    rows.push_back({{"terms", terms},
                    {"plain_local_realism_bound", bound_for(ModelClass::plain_local_realism(), terms)},
                    {"emission_time_realism_bound", bound_for(ModelClass::emission_time_realism(), terms)},
                    {"quantum_value", chained_quantum_value(terms)},
                    {"critical_visibility", cv},
                    {"violation_possible", cv <= 1.0}});
    plot.row(terms, cv, 0.0);
    if (cv < best) {
      best = cv;
      argmin = terms;
    }
  }
  out.files.emplace_back("critical_visibility.csv", plot.str());
  return {{"rows", rows}, {"argmin_terms", argmin}};
}

nlohmann::json run_thresholds(RunOutput& out) {
  nlohmann::json j = nlohmann::json::object();
  for (const char* name : {"Inefficiency", "Delays"}) {
    const ModelClass mc = ModelClass::from_name(name, 1.0);
    Csv plot("x,y,yerr");
    for (int k = 50; k <= 100; ++k) {
      const double eta = k / 100.0;
      plot.row(eta, bound_for(ModelClass::from_name(name, eta), 4), 0.0);
    }
    out.files.emplace_back(std::string("bound_vs_eta_") + name + ".csv", plot.str());
    j[name] = {{"threshold_efficiency", threshold_efficiency(mc)}, {"quantum_value", chained_quantum_value(4)}};
  }
  return j;
}

nlohmann::json run_bounds(const RunConfig& c) {
  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::string> names;
  if (c.model_class) {
    names = {*c.model_class};
  } else {
    names = {"PlainLocalRealism", "EmissionTimeRealism", "OutcomesOnly"};
    if (c.terms == 4) {
      names.insert(names.begin() + 1, "PathRealism");
      if (c.eta) {
        names.push_back("Inefficiency");
        names.push_back("Delays");
      }
    }
  }
  for (const auto& n : names) {
    const ModelClass mc = model_from_config(c, n);
    nlohmann::json row{{"model_class", mc.name()}, {"terms", c.terms}, {"bound", bound_for(mc, c.terms)}};
    if (mc.eta()) row["eta"] = *mc.eta();
    rows.push_back(row);
  }
  return {{"terms", c.terms}, {"quantum_value", chained_quantum_value(c.terms)}, {"bounds", rows}};
}

nlohmann::json run_visibility(const RunConfig& c, RunOutput& out) {
  const double q = chained_quantum_value(c.terms);
  const double bound = bound_for(ModelClass::emission_time_realism(), c.terms);
  Csv plot("x,y,yerr");
  for (int k = 0; k <= 20; ++k) {
    const double v = 0.9 + 0.005 * k;
    plot.row(v, v * q, 0.0);
  }
  out.files.emplace_back("statistic_vs_visibility.csv", plot.str());
  return {{"terms", c.terms},
          {"quantum_value", q},
          {"emission_time_realism_bound", bound},
          {"critical_visibility", critical_visibility(c.terms)},
          {"visibility", c.visibility},
          {"expected_statistic", c.visibility * q},
          {"violated", c.visibility * q > bound}};
}

nlohmann::json verdicts_json(const CorrelationTable& table, const SettingsChain& chain,
                             const std::vector<ModelClass>& classes) {
  nlohmann::json v = nlohmann::json::array();
  for (const auto& mc : classes) v.push_back(to_json(evaluate(table, chain, mc)));
  return v;
}

nlohmann::json run_simulation(const RunConfig& c, RunOutput& out) {
  const SettingsChain chain = chain_settings(c.terms);
  const Visibility vis(c.visibility);
  if (c.source == "setup") {
    const SetupResult r = simulate_setup(*c.variant, chain, vis, c.trials, RandomSource(c.seed, kSetupStream));
    out.files.emplace_back("correlations.csv", correlations_csv(r.table));
    out.files.emplace_back("plot.csv", term_plot_csv(r.table, chain));
    auto j = to_json(r);
    j["comparison"] = verdicts_json(r.table, chain, {ModelClass::plain_local_realism()});
    return j;
  }
  const ResponseSource src = c.source == "aklz" ? lhv_source(aklz_strategy(), RandomSource(c.seed, kResponseStream))
                                                : quantum_source(vis, RandomSource(c.seed, kResponseStream));
  const ExperimentResult r =
      run_timed_experiment(src, chain, c.trials, c.timing, RandomSource(c.seed, kEmissionStream));
  std::vector<ModelClass> classes{model_from_config(c, default_model(c), r.efficiency.eta)};
  if (classes.front().tag() != ModelTag::PlainLocalRealism) classes.push_back(ModelClass::plain_local_realism());
  out.files.emplace_back("correlations.csv", correlations_csv(r.table));
  out.files.emplace_back("plot.csv", term_plot_csv(r.table, chain));
  return {{"source", c.source},
          {"terms", c.terms},
          {"visibility", c.visibility},
          {"trials", r.trials},
          {"coincidences", r.coincidences},
          {"coincidence_fraction", r.coincidence_fraction()},
          {"efficiency", to_json(r.efficiency)},
          {"correlations", to_json(r.table)},
          {"verdicts", verdicts_json(r.table, chain, classes)}};
}

nlohmann::json run_setups(const RunConfig& c, RunOutput& out) {
  std::vector<SetupVariant> variants{SetupVariant::Franson, SetupVariant::PolarizationEntangled,
                                     SetupVariant::SwitchedMirrors, SetupVariant::CrossCoupled};
  if (c.variant) variants = {*c.variant};
  const SettingsChain chain = chain_settings(c.terms);
  nlohmann::json rows = nlohmann::json::array();
  Csv summary("variant,model_class,coincidence_fraction,statistic,bound,violated");
  for (const auto v : variants) {
    const SetupResult r = simulate_setup(v, chain, Visibility(c.visibility), c.trials,
                                         RandomSource(c.seed, kSetupStream + static_cast<std::uint64_t>(v)));
    rows.push_back(to_json(r));
    summary.row(to_string(v), r.verdict.model.name(), r.coincidence_fraction, r.verdict.statistic, r.verdict.bound,
                r.verdict.violated ? "true" : "false");
    out.files.emplace_back("correlations_" + to_string(v) + ".csv", correlations_csv(r.table));
  }
  out.files.emplace_back("setups.csv", summary.str());
  return {{"terms", c.terms}, {"visibility", c.visibility}, {"variants", rows}};
}

nlohmann::json run_verify(const RunConfig& c, RunOutput& out) {
  std::vector<ModelClass> classes;
  if (c.model_class) {
    classes.push_back(model_from_config(c, *c.model_class));
  } else {
    classes = {ModelClass::plain_local_realism(), ModelClass::emission_time_realism(), ModelClass::outcomes_only()};
    if (c.terms == 4) {
      classes.insert(classes.begin() + 1, ModelClass::path_realism());
      if (c.eta) {
        classes.push_back(ModelClass::inefficiency(*c.eta));
        classes.push_back(ModelClass::delays(*c.eta));
      }
    }
  }
  std::vector<SettingsChain> chains{chain_settings(c.terms)};
  const RandomSource chain_rs(c.seed, kChainStream);
  for (int i = 0; i < c.verify.random_chains; ++i) chains.push_back(random_chain(c.terms, chain_rs, i));

  nlohmann::json rows = nlohmann::json::array();
  Csv csv("model_class,chain,bound,best_found,margin,exact,pass");
  bool all_pass = true;
  for (const auto& mc : classes) {
    double best = -std::numeric_limits<double>::infinity();
    bool pass = true;
    int restarts = 0;
    nlohmann::json per_chain = nlohmann::json::array();
    for (std::size_t k = 0; k < chains.size(); ++k) {
      const GameSpec game = GameSpec::for_model(mc, chains[k]);
      const BoundReport r =
          verify_bound(game, {c.verify.restarts, c.verify.max_iterations, c.seed * 1000003ULL + k});
      best = std::max(best, r.best_found);
      pass = pass && r.pass;
      restarts += r.restarts;
      auto rj = to_json(r);
      rj["chain"] = k;
      per_chain.push_back(rj);
      csv.row(mc.name(), k, r.bound, r.best_found, r.margin, r.exact ? "true" : "false", r.pass ? "true" : "false");
      if (k == 0) out.files.emplace_back("witness_" + mc.name() + ".json", to_json(game, r.witness).dump(2) + "\n");
    }
    all_pass = all_pass && pass;
    nlohmann::json row{{"model_class", mc.name()},
                       {"bound", bound_for(mc, c.terms)},
                       {"best_found", best},
                       {"pass", pass},
                       {"restarts", restarts},
                       {"chains", per_chain}};
    if (mc.eta()) row["eta"] = *mc.eta();
    rows.push_back(row);
  }
  out.files.emplace_back("verify_bounds.csv", csv.str());
  return {{"terms", c.terms}, {"chains", chains.size()}, {"all_pass", all_pass}, {"classes", rows}};
}

nlohmann::json run_geometry(const RunConfig& c) {
  const PremiseCheck p = check_emission_time_premise(c.geometry);
  const EventOrder order = classify_event_order(c.geometry);
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : order.events) events.push_back({{"event", to_string(e.event)}, {"time_ns", e.time_ns}});
  nlohmann::json j{{"premise_satisfied", p.satisfied},
                   {"events", events},
                   {"late_choice_after_early_detection", order.late_choice_after_early_detection()},
                   {"advisory",
                    "spacelike separation of the early and late setting choices, with independent randomness "
                    "sources, is not modeled; only travel-time ordering at each station is checked"}};
  j["margin_ns"] = std::isfinite(p.margin_ns) ? nlohmann::json(p.margin_ns) : nlohmann::json(nullptr);
  return j;
}

template <typename T>
T get_as(const nlohmann::json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config key '") + key + "' has the wrong type");
  }
}

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError("unknown config key '" + k + "' in " + where);
  }
}

double get_number(const nlohmann::json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string("config key '") + key + "' must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const nlohmann::json& obj, const char* key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw ConfigError(std::string("config key '") + key + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

const std::vector<std::string>& scenario_names() { return kScenarios; }

RunConfig preset(const std::string& name) {
  if (std::find(kScenarios.begin(), kScenarios.end(), name) == kScenarios.end()) {
    throw ConfigError("unknown scenario '" + name + "'");
  }
  RunConfig c;
  c.scenario = name;
  if (name == "aklz-demo") {
    c.source = "aklz";
    c.model_class = "OutcomesOnly";
    c.trials = 1000000;
  } else if (name == "chained6") {
    c.terms = 6;
    c.model_class = "EmissionTimeRealism";
    c.trials = 1000000;
  } else if (name == "setups") {
    c.source = "setup";
  } else if (name == "verify-bounds") {
    c.verify.random_chains = 4;
    c.eta = 0.9;
  } else if (name == "visibility") {
    c.terms = 6;
  } else if (name == "bounds") {
    c.eta = 0.9;
  }
  return c;
}

RunConfig parse_config(const nlohmann::json& doc) {
  check_keys(doc,
             {"scenario", "source", "variant", "model_class", "eta", "terms", "visibility", "trials", "seed", "timing",
              "geometry", "verify", "out_dir"},
             "config");
  RunConfig c = preset(doc.contains("scenario") ? get_as<std::string>(doc, "scenario") : "table1");
  try {
    if (doc.contains("variant")) {
      c.variant = setup_variant_from_string(get_as<std::string>(doc, "variant"));
      if (!doc.contains("source")) c.source = "setup";
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (doc.contains("source")) c.source = get_as<std::string>(doc, "source");
  if (doc.contains("model_class")) c.model_class = get_as<std::string>(doc, "model_class");
  if (doc.contains("eta")) c.eta = get_number(doc, "eta");
  if (doc.contains("terms")) c.terms = static_cast<int>(get_count(doc, "terms"));
  if (doc.contains("visibility")) c.visibility = get_number(doc, "visibility");
  if (doc.contains("trials")) c.trials = get_count(doc, "trials");
  if (doc.contains("seed")) c.seed = get_count(doc, "seed");
  if (doc.contains("out_dir")) c.out_dir = get_as<std::string>(doc, "out_dir");
  if (doc.contains("timing")) {
    const auto& t = doc["timing"];
    check_keys(t, {"short_arm_delay_ns", "path_difference_ns", "coincidence_window_ns"}, "timing");
    if (t.contains("short_arm_delay_ns")) c.timing.short_arm_delay_ns = get_number(t, "short_arm_delay_ns");
    if (t.contains("path_difference_ns")) c.timing.path_difference_ns = get_number(t, "path_difference_ns");
    if (t.contains("coincidence_window_ns")) c.timing.coincidence_window_ns = get_number(t, "coincidence_window_ns");
  }
  if (doc.contains("geometry")) {
    const auto& g = doc["geometry"];
    check_keys(g,
               {"path_difference_ns", "modulator_to_detector_ns", "setting_switch_period_ns", "detector_latency_ns"},
               "geometry");
    if (g.contains("path_difference_ns")) c.geometry.path_difference_ns = get_number(g, "path_difference_ns");
    if (g.contains("modulator_to_detector_ns"))
      c.geometry.modulator_to_detector_ns = get_number(g, "modulator_to_detector_ns");
    if (g.contains("setting_switch_period_ns")) {
      // null means static settings (infinite switching period)
      c.geometry.setting_switch_period_ns = g["setting_switch_period_ns"].is_null()
                                                ? std::numeric_limits<double>::infinity()
                                                : get_number(g, "setting_switch_period_ns");
    }
    if (g.contains("detector_latency_ns")) c.geometry.detector_latency_ns = get_number(g, "detector_latency_ns");
  }
  if (doc.contains("verify")) {
    const auto& v = doc["verify"];
    check_keys(v, {"restarts", "max_iterations", "random_chains"}, "verify");
    if (v.contains("restarts")) c.verify.restarts = static_cast<int>(get_count(v, "restarts"));
    if (v.contains("max_iterations")) c.verify.max_iterations = static_cast<int>(get_count(v, "max_iterations"));
    if (v.contains("random_chains")) c.verify.random_chains = static_cast<int>(get_count(v, "random_chains"));
  }
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  if (std::find(kScenarios.begin(), kScenarios.end(), c.scenario) == kScenarios.end()) {
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  }
  if (c.source != "quantum" && c.source != "aklz" && c.source != "setup") {
    throw ConfigError("source must be one of quantum, aklz, setup");
  }
  if (c.source == "setup" && is_simulation(c.scenario) && !c.variant) {
    throw ConfigError("source 'setup' needs a variant");
  }
  if (c.terms < 4 || c.terms % 2 != 0 || c.terms > 64) throw ConfigError("terms must be even and in [4, 64]");
  if (!(c.visibility >= 0.0 && c.visibility <= 1.0)) throw ConfigError("visibility must lie in [0, 1]");
  if (c.trials == 0) throw ConfigError("trials must be positive");
  if (c.eta && !(*c.eta > 0.0 && *c.eta <= 1.0)) throw ConfigError("eta must lie in (0, 1]");
  if (c.verify.restarts < 1 || c.verify.max_iterations < 1) throw ConfigError("verify budget must be positive");
  if (c.out_dir.empty()) throw ConfigError("out_dir must not be empty");
  if (c.model_class) {
    ModelClass mc = ModelClass::plain_local_realism();
    try {
      mc = ModelClass::from_name(*c.model_class, c.eta.value_or(1.0));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const bool chsh_only = mc.tag() == ModelTag::Inefficiency || mc.tag() == ModelTag::Delays ||
                           mc.tag() == ModelTag::PathRealism;
    if (chsh_only && c.terms != 4) throw ConfigError(mc.name() + " applies to four-term chains only");
    if (ModelClass::requires_eta(mc.tag()) && !c.eta && !is_simulation(c.scenario)) {
      throw ConfigError(mc.name() + " needs eta");
    }
  }
  try {
    c.timing.validate();
    c.geometry.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"scenario", c.scenario},
                   {"source", c.source},
                   {"terms", c.terms},
                   {"visibility", c.visibility},
                   {"trials", c.trials},
                   {"seed", c.seed},
                   {"out_dir", c.out_dir},
                   {"timing",
                    {{"short_arm_delay_ns", c.timing.short_arm_delay_ns},
                     {"path_difference_ns", c.timing.path_difference_ns},
                     {"coincidence_window_ns", c.timing.coincidence_window_ns}}},
                   {"geometry",
                    {{"path_difference_ns", c.geometry.path_difference_ns},
                     {"modulator_to_detector_ns", c.geometry.modulator_to_detector_ns},
                     {"setting_switch_period_ns",
                      std::isfinite(c.geometry.setting_switch_period_ns)
                          ? nlohmann::json(c.geometry.setting_switch_period_ns)
                          : nlohmann::json(nullptr)},
                     {"detector_latency_ns", c.geometry.detector_latency_ns}}},
                   {"verify",
                    {{"restarts", c.verify.restarts},
                     {"max_iterations", c.verify.max_iterations},
                     {"random_chains", c.verify.random_chains}}}};
  if (c.variant) j["variant"] = to_string(*c.variant);
  if (c.model_class) j["model_class"] = *c.model_class;
  if (c.eta) j["eta"] = *c.eta;
  return j;
}

RunOutput execute(const RunConfig& c) {
  validate(c);
  RunOutput out;
  nlohmann::json result;
  if (c.scenario == "table1") {
    result = run_table1(out);
  } else if (c.scenario == "thresholds") {
    result = run_thresholds(out);
  } else if (c.scenario == "bounds") {
    result = run_bounds(c);
  } else if (c.scenario == "visibility") {
    result = run_visibility(c, out);
  } else if (is_simulation(c.scenario)) {
    result = run_simulation(c, out);
  } else if (c.scenario == "setups") {
    result = run_setups(c, out);
  } else if (c.scenario == "verify-bounds") {
    result = run_verify(c, out);
  } else if (c.scenario == "geometry") {
    result = run_geometry(c);
  }
  nlohmann::json config = to_json(c);
  config.erase("out_dir");  // where the report goes is not part of what it says
  out.report = {{"scenario", c.scenario}, {"config", config}, {"result", result}};
  return out;
}

int run(const RunConfig& c, std::ostream& err) {
  try {
    const RunOutput out = execute(c);
    namespace fs = std::filesystem;
    const fs::path dir(c.out_dir);
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
      std::ofstream f(dir / name, std::ios::binary);
      f << content;
      if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    };
    write("report.json", out.report.dump(2) + "\n");
    for (const auto& [name, content] : out.files) write(name, content);
    return 0;
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace franson
