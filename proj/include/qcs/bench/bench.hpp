#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/config.hpp"
#include "qcs/lang/checker.hpp"
#include "qcs/sim/executor.hpp"

namespace qcs::bench {

enum class Family { bm11, bm12, bm13, bm21 };
enum class Variant { single, distributed, aggregated, aggregated_int };
enum class Bm13Kind { frame_lut, binary_rep, frequency, amplitude, threshold };
enum class Bm21Param { frequency, amplitude, dc_offset, threshold };
enum class Bm21Matrix { dense, diagonal, blocks2 };

const char* family_name(Family f);
const char* variant_name(Variant v);
const char* bm13_kind_name(Bm13Kind k);
const char* bm21_param_name(Bm21Param p);
const char* bm21_matrix_name(Bm21Matrix m);

struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& msg) : std::runtime_error(msg) {}
};
struct MissingTimestamp : std::runtime_error {
    explicit MissingTimestamp(const std::string& msg) : std::runtime_error(msg) {}
};
// The repeat-until-success family has no fixed-horizon prediction; use
// predict_repeat_until_success_latency instead.
struct NotDeterministic : std::runtime_error {
    explicit NotDeterministic(const std::string& msg) : std::runtime_error(msg) {}
};

struct Bm21Config {
    int n_in = 10;
    int n_out = 10;
    int64_t n_shots = 1000;
    Tick shot_period = 1000;
    Bm21Param param_kind = Bm21Param::frequency;
    Bm21Matrix matrix_form = Bm21Matrix::dense;
    bool normalize = true;  // divide the histogram residual by n_shots
};

struct BenchmarkSpec {
    Family family = Family::bm11;
    Variant variant = Variant::single;
    Bm13Kind bm13_kind = Bm13Kind::frame_lut;  // bm13 only
    int n_inout = 1;
    Bm21Config bm21;  // bm21 only

    std::string id() const;
    void validate() const;  // throws InvalidSpec
};

// The program source for a spec; parsing it gives the same structure as the
// corresponding corpus listing.
std::string benchmark_source(const BenchmarkSpec& spec);
lang::Program build_benchmark(const BenchmarkSpec& spec);

struct LatencyReport {
    BenchmarkSpec spec;
    Tick feedback_latency = 0;
    std::map<std::string, Tick> component_breakdown;
    std::vector<Tick> re_times;
    std::vector<Tick> ce_times;
    uint64_t seed = 0;
    std::string config_hash;
};

// Feedback latency from the recorded timestamps: first dependent output
// sample minus the last input sample the computation needed.
LatencyReport extract_latency(const sim::EventTrace& tr, const BenchmarkSpec& spec,
                              const MachineConfig& mc);

// Closed-form critical path under the cost model, one entry per component.
std::map<std::string, Tick> predict_breakdown(const CostModel& cm, const BenchmarkSpec& spec,
                                              const MachineConfig& mc);
Tick predict_latency(const CostModel& cm, const BenchmarkSpec& spec, const MachineConfig& mc);
// Latency of the repeat-until-success family measured from its last
// (successful) readout; independent of the iteration count k.
Tick predict_repeat_until_success_latency(const CostModel& cm, const BenchmarkSpec& spec,
                                          int64_t k);

struct SuiteConfig {
    std::vector<BenchmarkSpec> benchmarks;
    MachineConfig machine;
    CostModel cost_model;
    uint64_t seed = 1;
    int64_t repeat_until_success_k = 3;  // plant used for the bm12 family
    int jobs = 1;
};

// Runs every spec and returns reports in spec order regardless of the number
// of worker threads.
std::vector<LatencyReport> run_suite(const SuiteConfig& cfg);

// Every family/variant/kind at each requested channel count (plus the
// single-channel-only listings once).
std::vector<BenchmarkSpec> default_suite(const std::vector<int>& n_values = {1, 20, 50});

}  // namespace qcs::bench
