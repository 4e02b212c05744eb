#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "franson/cli.hpp"

using namespace franson;
namespace fs = std::filesystem;

namespace {

nlohmann::json load(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("franson_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(FRANSON_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("every preset is listed and parses") {
    for (const auto& name : scenario_names()) {
      const auto c = parse_config({{"scenario", name}});
      CHECK(c.scenario == name);
    }
    CHECK_THROWS_AS(preset("nope"), ConfigError);
  }

  TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse_config({{"scenario", "table1"}, {"bogus", 1}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"terms", 5}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"terms", "four"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"visibility", 1.5}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"trials", 0}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"trials", -4}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"eta", 0}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"variant", "nope"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"model_class", "Nope"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"scenario", "bounds"}, {"model_class", "PathRealism"}, {"terms", 6}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"scenario", "simulate"}, {"source", "setup"}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"timing", {{"coincidence_window_ns", 500}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"geometry", {{"path_difference_ns", -1}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"verify", {{"restarts", 0}}}}), ConfigError);
    CHECK_THROWS_AS(parse_config({{"timing", {{"extra", 1}}}}), ConfigError);
    const auto c = parse_config({{"scenario", "simulate"}, {"variant", "cross-coupled"}, {"trials", 10}});
    CHECK(c.source == "setup");
    CHECK(c.variant == SetupVariant::CrossCoupled);
  }

  TEST_CASE("config JSON round trip") {
    const auto c = parse_config({{"scenario", "geometry"},
                                 {"geometry", {{"setting_switch_period_ns", nullptr}, {"detector_latency_ns", 2.5}}},
                                 {"seed", 99}});
    const auto back = parse_config(to_json(c));
    CHECK(to_json(back) == to_json(c));
    CHECK(std::isinf(back.geometry.setting_switch_period_ns));
  }

  TEST_CASE("reports are byte-identical for the same config and seed") {
    auto c = parse_config({{"scenario", "aklz-demo"}, {"trials", 20000}, {"seed", 5}});
    const auto a = execute(c), b = execute(c);
    CHECK(a.report.dump(2) == b.report.dump(2));
    REQUIRE(a.files.size() == b.files.size());
    for (std::size_t i = 0; i < a.files.size(); ++i) CHECK(a.files[i] == b.files[i]);
    c.seed = 6;
    CHECK(execute(c).report.dump() != a.report.dump());

    const auto d1 = scratch_dir("bytes1"), d2 = scratch_dir("bytes2");
    auto v = parse_config({{"scenario", "verify-bounds"}, {"verify", {{"restarts", 4}, {"random_chains", 1}}}});
    v.out_dir = d1.string();
    std::ostringstream err;
    REQUIRE(run(v, err) == 0);
    v.out_dir = d2.string();
    REQUIRE(run(v, err) == 0);
    for (const auto& entry : fs::directory_iterator(d1)) {
      std::ifstream f1(entry.path(), std::ios::binary), f2(d2 / entry.path().filename(), std::ios::binary);
      std::stringstream s1, s2;
      s1 << f1.rdbuf();
      s2 << f2.rdbuf();
      CHECK(s1.str() == s2.str());
    }
  }

  TEST_CASE("run writes report, CSV tables and plot data") {
    const auto d = scratch_dir("files");
    auto c = parse_config({{"scenario", "chained6"}, {"trials", 5000}});
    c.out_dir = d.string();
    std::ostringstream err;
    REQUIRE(run(c, err) == 0);
    CHECK(fs::exists(d / "report.json"));
    std::ifstream corr(d / "correlations.csv");
    std::string header;
    std::getline(corr, header);
    CHECK(header == "site1_rad,site2_rad,estimate,count,standard_error");
    std::ifstream plot(d / "plot.csv");
    std::getline(plot, header);
    CHECK(header == "x,y,yerr");
    int rows = 0;
    for (std::string line; std::getline(plot, line);) ++rows;
    CHECK(rows == 6);
    const auto report = load(d / "report.json");
    CHECK(report["scenario"] == "chained6");
    CHECK(report["result"].contains("efficiency"));
  }

  TEST_CASE("exit status: resource limit and invalid configs") {
    std::ostringstream err;
    RunConfig big = preset("verify-bounds");
    big.terms = 8;
    big.model_class = "EmissionTimeRealism";
    big.out_dir = scratch_dir("limit").string();
    CHECK(run(big, err) == 3);
    RunConfig bad = preset("table1");
    bad.terms = 3;
    CHECK(run(bad, err) == 2);
    CHECK(err.str().find("invalid config") != std::string::npos);
  }

  TEST_CASE("preset golden values") {
    const auto golden = load(fs::path(FRANSON_GOLDEN_DIR) / "presets.json");
    for (const auto& c : golden["cases"]) {
      nlohmann::json doc = c.value("overrides", nlohmann::json::object());
      doc["scenario"] = c["preset"];
      const auto out = execute(parse_config(doc));
      for (const auto& chk : c["checks"]) {
        const std::string path = chk["path"];
        INFO(c["preset"].get<std::string>() << " " << path);
        const nlohmann::json::json_pointer ptr(path);
        REQUIRE(out.report.contains(ptr));
        const auto& got = out.report.at(ptr);
        const auto& want = chk["value"];
        if (want.is_number() && chk.contains("tol")) {
          CHECK(std::abs(got.get<double>() - want.get<double>()) <= chk["tol"].get<double>());
        } else {
          CHECK(got == want);
        }
      }
    }
  }

  TEST_CASE("command-line tool") {
    const auto d = scratch_dir("binary");
    CHECK(run_binary("report --preset table1 --out " + d.string()) == 0);
    CHECK(fs::exists(d / "report.json"));
    CHECK(fs::exists(d / "critical_visibility.csv"));
    CHECK(run_binary("bounds --terms 6 --out " + d.string()) == 0);
    CHECK(load(d / "report.json")["result"]["bounds"][1]["bound"] == 5.0);
    CHECK(run_binary("simulate --variant switched-mirrors --trials 2000 --out " + d.string()) == 0);
    CHECK(load(d / "report.json")["result"]["coincidence_fraction"] == 1.0);
    CHECK(run_binary("geometry --out " + d.string()) == 0);
    CHECK(run_binary("visibility --terms 10 --visibility 0.95 --out " + d.string()) == 0);
    CHECK(load(d / "report.json")["result"]["violated"] == true);
    CHECK(run_binary("verify-bounds --model-class EmissionTimeRealism --terms 8 --out " + d.string()) == 3);
    CHECK(run_binary("simulate --terms 5 --out " + d.string()) == 2);
    CHECK(run_binary("simulate --no-such-flag") == 2);
    CHECK(run_binary("report") == 2);
    CHECK(run_binary("report --config /nonexistent.json") == 2);
    std::ofstream(d / "cfg.json") << R"({"scenario": "chained6", "trials": 2000, "visibility": 0.9})";
    CHECK(run_binary("report --config " + (d / "cfg.json").string() + " --out " + d.string()) == 0);
    CHECK(load(d / "report.json")["result"]["visibility"] == 0.9);
  }
}
