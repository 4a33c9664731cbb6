#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/bench/bench.hpp"
#include "qcs/calib/calib.hpp"

namespace qcs::report {

struct ReportError : std::runtime_error {
    explicit ReportError(const std::string& msg) : std::runtime_error(msg) {}
};

// A measured feedback latency went over the configured budget.
struct MaxLatencyExceeded : ReportError {
    std::string benchmark_id;
    MaxLatencyExceeded(const std::string& id, Tick measured, Tick limit)
        : ReportError("benchmark '" + id + "' exceeds max_latency: " + std::to_string(measured) +
                      " > " + std::to_string(limit) + " ticks"),
          benchmark_id(id) {}
};

// One closed-loop tracking scenario as configured, plus the plant it runs
// against.
struct ScenarioConfig {
    std::string name;
    std::string kind;  // "rabi" or "ramsey"
    calib::TrackingScenario scenario;
    PlantModel plant;
};

struct RunConfig {
    MachineConfig machine;
    int bank_size = 50;
    CostModel cost_model;
    std::vector<bench::BenchmarkSpec> benchmarks;
    std::vector<ScenarioConfig> scenarios;
    uint64_t seed = 0;
    int64_t repeat_until_success_k = 3;
    Tick max_latency = 0;  // 0 = no budget check
    int jobs = 1;
};

// Parses and validates a run configuration. The seed is mandatory.
RunConfig load_run_config(const std::string& json_text);
RunConfig load_run_config_file(const std::string& path);

// FNV-1a over the canonical (sorted-key, integer-tick) serialization of every
// semantic field; key order in the input file cannot affect it.
std::string config_hash(const RunConfig& cfg);

struct ScenarioSummary {
    std::string name;
    std::string kind;
    int rounds = 0;
    std::map<std::string, double> metrics;
};

struct SuiteReport {
    std::string tool_version;
    std::string config_hash;
    std::vector<bench::LatencyReport> latencies;
    std::vector<ScenarioSummary> scenarios;
    double wall_seconds = 0.0;
};

// Runs every benchmark and scenario in the config. Throws MaxLatencyExceeded
// when a latency budget is set and broken.
SuiteReport run_all(const RunConfig& cfg);

// Runs one benchmark from the config and returns the raw event trace.
sim::EventTrace run_benchmark_trace(const RunConfig& cfg, const bench::BenchmarkSpec& spec);

// include_wall = false gives the byte-stable form used for comparisons.
std::string suite_report_json(const SuiteReport& rep, bool include_wall = true);

extern const char* const tool_version;

}  // namespace qcs::report
