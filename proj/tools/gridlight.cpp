#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gridlight/config.hpp"
#include "gridlight/scenario.hpp"

namespace {

// 0 success, 1 config error, 2 acceptance failure, 3 I/O.
constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kAcceptanceFailure = 2;
constexpr int kIoError = 3;

} // namespace

int main(int argc, char** argv) {
    using gridlight::harness::Config;
    using gridlight::harness::ConfigError;

    CLI::App app{"Photon-program grid simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_given = false;
    long shots = -1;
    std::vector<std::string> overrides;

    auto* run = app.add_subcommand("run", "Run a scenario and write outputs");
    run->add_option("scenario", scenario, "Scenario name")->required();
    run->add_option("--config", config_path, "Config file (key = value lines)");
    run->add_option("--seed", seed, "RNG seed (required here or in the config)")
        ->each([&](const std::string&) { seed_given = true; });
    run->add_option("--shots", shots, "Number of shots");
    run->add_option("--out", out_dir, "Output directory");
    run->add_option("--set", overrides, "Override config key (key=value), repeatable");

    auto* oracle = app.add_subcommand("oracle", "Print the oracle table for a scenario");
    oracle->add_option("scenario", scenario, "Scenario name")->required();
    oracle->add_option("--config", config_path, "Config file (key = value lines)");
    oracle->add_option("--set", overrides, "Override config key (key=value), repeatable");

    auto* audit = app.add_subcommand("audit", "Run the invariant suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (audit->parsed()) {
            return gridlight::harness::run_audit(std::cout) == 0 ? kOk
                                                                 : kAcceptanceFailure;
        }

        Config config;
        if (!config_path.empty()) {
            config = Config::from_file(config_path);
        }
        config.set("scenario", scenario);
        if (seed_given) config.set("seed", std::to_string(seed));
        if (shots >= 0) config.set("shots", std::to_string(shots));
        for (const auto& assignment : overrides) config.apply_override(assignment);

        if (oracle->parsed()) {
            std::cout << gridlight::harness::oracle_table(config).dump(2) << "\n";
            return kOk;
        }

        auto result = gridlight::harness::run_scenario(config);
        gridlight::harness::emit_outputs(result, out_dir);
        std::cout << result.summary.dump(2) << "\n";
        if (!result.accepted) {
            std::cerr << "acceptance check failed for scenario " << scenario << "\n";
            return kAcceptanceFailure;
        }
        return kOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        std::string what = e.what();
        bool io = what.find("cannot open") != std::string::npos ||
                  what.find("write failed") != std::string::npos ||
                  what.find("output directory") != std::string::npos;
        std::cerr << (io ? "i/o error: " : "error: ") << what << "\n";
        return io ? kIoError : kConfigError;
    }
}
