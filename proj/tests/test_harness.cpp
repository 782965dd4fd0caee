#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gridlight/config.hpp"
#include "gridlight/scenario.hpp"
#include "gridlight/stats.hpp"

using namespace gridlight;
using harness::Config;
using harness::Json;

TEST_CASE("config parsing: comments, nesting, overrides") {
    auto c = Config::from_string(
        "# a comment\n"
        "scenario = double_slit\n"
        "seed = 42   # trailing comment\n"
        "geometry.bins = 25\n"
        "angles = 0, 22.5, 45\n"
        "flag = true\n");
    CHECK(c.get_string("scenario") == "double_slit");
    CHECK(c.get_seed() == 42);
    CHECK(c.get_int("geometry.bins", 0) == 25);
    CHECK(c.get_list("angles") == std::vector<double>{0.0, 22.5, 45.0});
    CHECK(c.get_bool("flag", false));
    CHECK(c.get_double("missing", 7.5) == 7.5);

    c.apply_override("geometry.bins=31");
    CHECK(c.get_int("geometry.bins", 0) == 31);
    CHECK_THROWS_AS(c.apply_override("nonsense"), harness::ConfigError);
    CHECK_THROWS_AS(Config::from_string("just a line\n"), harness::ConfigError);
}

TEST_CASE("seed has no wall-clock default") {
    auto c = Config::from_string("scenario = double_slit\n");
    CHECK_THROWS_AS(c.get_seed(), harness::ConfigError);
}

TEST_CASE("canonical config text round-trips") {
    auto c = Config::from_string("b = 2\na = 1\nnested.k = v\n");
    auto reparsed = Config::from_string(c.canonical_text());
    CHECK(reparsed.canonical_text() == c.canonical_text());
}

TEST_CASE("chi-square statistics behave sanely") {
    // Exact match: p close to 1.
    std::vector<std::int64_t> obs = {250, 250, 250, 250};
    auto r = stats::chi_square(obs, {0.25, 0.25, 0.25, 0.25});
    CHECK(r.p_value > 0.99);
    // Gross mismatch: p close to 0.
    auto bad = stats::chi_square({900, 50, 25, 25}, {0.25, 0.25, 0.25, 0.25});
    CHECK(bad.p_value < 1e-6);
    // Two-sample, identical histograms.
    auto ts = stats::chi_square_two_sample({100, 200, 300}, {100, 200, 300});
    CHECK(ts.p_value > 0.99);
}

TEST_CASE("oracle module stays independent of the engines") {
    for (const char* rel : {"/src/oracle.cpp", "/include/gridlight/oracle.hpp"}) {
        std::ifstream in(std::string(GRIDLIGHT_SOURCE_DIR) + rel);
        REQUIRE(in.good());
        std::stringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        CHECK(text.find("wavefield.hpp") == std::string::npos);
        CHECK(text.find("collapse.hpp") == std::string::npos);
        CHECK(text.find("scenario.hpp") == std::string::npos);
    }
}

namespace {

Config mz_config(int workers) {
    auto c = Config::from_string(
        "scenario = mach_zehnder\nseed = 7\nshots = 20000\nevents_limit = 100\n");
    c.set("workers", std::to_string(workers));
    return c;
}

Json strip_timing(Json summary) {
    summary.erase("timing");
    return summary;
}

} // namespace

TEST_CASE("determinism: identical (config, seed) gives identical output") {
    auto a = harness::run_scenario(mz_config(1));
    auto b = harness::run_scenario(mz_config(1));
    CHECK(strip_timing(a.summary).dump() == strip_timing(b.summary).dump());
    REQUIRE(a.events.size() == b.events.size());
    for (std::size_t i = 0; i < a.events.size(); ++i) {
        CHECK(a.events[i].dump() == b.events[i].dump());
    }
}

TEST_CASE("determinism: worker count never changes results") {
    auto one = harness::run_scenario(mz_config(1));
    auto four = harness::run_scenario(mz_config(4));
    CHECK(strip_timing(one.summary).dump() == strip_timing(four.summary).dump());
}

TEST_CASE("different seeds give different samples") {
    auto c1 = mz_config(1);
    auto c2 = mz_config(1);
    c2.set("seed", "8");
    auto a = harness::run_scenario(c1);
    auto b = harness::run_scenario(c2);
    CHECK(strip_timing(a.summary).dump() != strip_timing(b.summary).dump());
}

TEST_CASE("run summary embeds oracle values and echoes the config") {
    auto result = harness::run_scenario(mz_config(2));
    CHECK(result.accepted);
    CHECK(result.summary["scenario"] == "mach_zehnder");
    CHECK(result.summary["outcomes"]["D1"]["oracle"] == 1.0);
    CHECK(result.summary["outcomes"]["D2"]["count"] == 0);
    CHECK(result.summary.contains("fingerprint"));
    // The echo round-trips through the parser (workers excluded: it is an
    // execution knob, not part of the physics).
    std::string echo;
    for (auto& [key, value] : result.summary["config"].items()) {
        echo += key + " = " + value.get<std::string>() + "\n";
    }
    auto reparsed = Config::from_string(echo);
    auto rerun = harness::run_scenario(reparsed);
    CHECK(strip_timing(rerun.summary).dump() == strip_timing(result.summary).dump());
}

TEST_CASE("emit_outputs writes the three artifacts") {
    auto result = harness::run_scenario(mz_config(1));
    auto dir = std::filesystem::temp_directory_path() / "gridlight_test_out";
    std::filesystem::remove_all(dir);
    harness::emit_outputs(result, dir);
    CHECK(std::filesystem::exists(dir / "summary.json"));
    CHECK(std::filesystem::exists(dir / "histogram.csv"));
    CHECK(std::filesystem::exists(dir / "events.jsonl"));

    std::ifstream events(dir / "events.jsonl");
    std::string line;
    std::size_t lines = 0;
    while (std::getline(events, line)) {
        CHECK_NOTHROW(static_cast<void>(Json::parse(line)));
        lines++;
    }
    CHECK(lines == result.events.size());
    CHECK(lines <= 100);  // events_limit honored
    std::filesystem::remove_all(dir);
}

TEST_CASE("oracle tables exist for every scenario") {
    for (const auto& name : harness::scenario_names()) {
        auto c = Config::from_string("seed = 1\n");
        c.set("scenario", name);
        auto table = harness::oracle_table(c);
        CHECK(table["scenario"] == name);
    }
    auto c = Config::from_string("scenario = nope\nseed = 1\n");
    CHECK_THROWS_AS(harness::oracle_table(c), harness::ConfigError);
    CHECK_THROWS_AS(harness::run_scenario(c), harness::ConfigError);
}

TEST_CASE("invariant audit passes") {
    std::ostringstream out;
    CHECK(harness::run_audit(out) == 0);
    // One line per check, each marked PASS.
    std::istringstream lines(out.str());
    std::string line;
    int checks = 0;
    while (std::getline(lines, line)) {
        CHECK(line.substr(0, 4) == "PASS");
        checks++;
    }
    CHECK(checks >= 7);
}
