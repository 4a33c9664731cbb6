#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/lang/ast.hpp"
#include "qcs/signal.hpp"

namespace qcs::sim {

enum class EventKind {
    output_sample_start,
    input_last_sample,
    instruction_issue,
    timestamp_capture,
    saturation,
    strict_violation,
};

const char* event_kind_name(EventKind k);

struct Event {
    EventKind kind;
    std::string element;  // empty for purely classical events
    Tick tick = 0;
    std::string label;
};

struct SimError : std::runtime_error {
    explicit SimError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StrictTimingError : SimError {
    std::string element;
    Tick tick;
    Tick gap;
    StrictTimingError(std::string elem, Tick t, Tick g)
        : SimError("strict timing violation on '" + elem + "' at tick " + std::to_string(t) +
                   ": gap of " + std::to_string(g) + " ticks"),
          element(std::move(elem)),
          tick(t),
          gap(g) {}
};

struct MaxLatencyError : SimError {
    std::string element;
    Tick needed;
    Tick limit;
    MaxLatencyError(std::string elem, Tick n, Tick l)
        : SimError("max_time exceeded on '" + elem + "': needs " + std::to_string(n) +
                   " ticks, limit " + std::to_string(l)),
          element(std::move(elem)),
          needed(n),
          limit(l) {}
};

struct UnknownLabelError : SimError {
    explicit UnknownLabelError(const std::string& label)
        : SimError("unknown timestamp label '" + label + "'") {}
};

struct FinalVar {
    lang::VarKind kind = lang::VarKind::int_kind;
    std::vector<int64_t> dims;
    std::vector<int64_t> ints;  // int/bool values
    std::vector<Fixed> fx;      // fixed values
};

struct EmittedPulse {
    std::string element;
    Tick t0 = 0;
    std::vector<Fixed> samples;
};

// Scheduling record for one operation inside a strict_timing block. resync
// marks re-synchronization points (align, block entry) that legally break
// the back-to-back chain.
struct StrictOp {
    int block = 0;
    std::string element;
    Tick start = 0;
    Tick end = 0;
    bool resync = false;
};

struct Violation {
    std::string element;
    Tick tick = 0;
    Tick gap = 0;
};

struct EventTrace {
    std::vector<Event> events;
    std::map<std::string, FinalVar> final_vars;
    std::map<std::string, std::vector<Tick>> timestamps;
    std::vector<EmittedPulse> waveforms;
    std::vector<StrictOp> strict_ops;
    uint64_t seed = 0;

    void add(EventKind k, const std::string& element, Tick tick, const std::string& label);
    // Stable sort by tick; call once at end of run.
    void finalize();
    // One event per line, fields in order: kind, element, tick, label.
    std::string to_jsonl() const;
};

std::vector<Violation> verify_strict_timing(const EventTrace& tr);

// Scalar timestamp ("ce_time") or one entry of a vector one ("ce_time[0]").
Tick get_timestamp(const EventTrace& tr, const std::string& label);
// All entries of a vector timestamp.
std::vector<Tick> get_timestamps(const EventTrace& tr, const std::string& label);

}  // namespace qcs::sim
