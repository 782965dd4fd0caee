#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gridlight/config.hpp"

namespace gridlight::harness {

using Json = nlohmann::ordered_json;

struct HistogramRow {
    int bin = 0;
    std::int64_t count = 0;
    double frequency = 0.0;
    double oracle_prob = 0.0;
};

struct RunResult {
    Json summary;                 // full RunSummary
    std::vector<Json> events;     // one collapse event per line
    std::vector<HistogramRow> histogram;
    std::vector<std::string> field_dump;  // CSV rows, written when dump_field is set
    bool accepted = true;         // oracle comparison verdict
};

/// Builds the topology, solves the field, runs the shot loop, compares
/// against the oracle and assembles the RunSummary. Bit-identical for
/// identical (config, seed), independent of worker count.
RunResult run_scenario(const Config& config);

/// Oracle-side table only, no simulation.
Json oracle_table(const Config& config);

/// Writes summary.json, histogram.csv and events.jsonl into out_dir.
void emit_outputs(const RunResult& result, const std::filesystem::path& out_dir);

/// Invariant suite: conservation, unitarity, holographic locality,
/// linearity, ordering. Prints one line per check; returns the number
/// of failures.
int run_audit(std::ostream& out);

const std::vector<std::string>& scenario_names();

} // namespace gridlight::harness
