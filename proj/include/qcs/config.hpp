#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

#include "qcs/signal.hpp"

namespace qcs {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ElementRole { control, readout, both };

struct ElementConfig {
    std::string name;
    ElementRole role = ElementRole::control;
    double if_freq_hz = 100e6;
    Tick time_of_flight = 0;   // readout elements
    Tick sampling_window = 0;  // readout elements
    std::set<std::string> pulses;

    bool can_read() const { return role != ElementRole::control; }
};

struct MachineConfig {
    std::map<std::string, ElementConfig> elements;
    std::map<std::string, PulseDef> pulse_library;

    const ElementConfig& element(const std::string& name) const;
    const PulseDef& pulse(const std::string& name) const;
    void validate() const;
};

// Per-primitive classical-processing durations, in ticks. The decomposition
// of a feedback latency into these components is configuration, not code;
// docs/costs.md defines where each one is charged.
struct CostModel {
    Tick discrimination_cost = 20;   // threshold compare on fixed values
    Tick lut_cost = 12;              // table read with a data-dependent index
    Tick arithmetic_cost_per_op = 4;
    Tick bin2dec_cost_per_bit = 2;
    Tick matvec_cost_per_entry = 1;
    Tick param_update_cost = 10;     // frequency/frame/amplitude/offset/threshold apply
    Tick issue_cost = 8;             // decision-to-first-sample
    Tick aggregation_c0 = 16;        // fan-in communication, fixed part
    Tick aggregation_c1 = 2;         // fan-in communication, per channel
    Tick branch_cost = 12;           // data-dependent control-flow decision

    void validate() const;
};

// Default benchmark machine: plain readout_element/control_element plus
// suffixed banks readout_element_0..n-1 / control_element_0..n-1, a 200 ns
// constant readout pulse and the 20 ns sigma-4 gaussian control pulse, all
// at the 100 MHz intermediate frequency.
MachineConfig default_machine_config(int bank_size = 50);

}  // namespace qcs
