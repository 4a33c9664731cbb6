#include "qcs/config.hpp"

namespace qcs {

const ElementConfig& MachineConfig::element(const std::string& name) const {
    auto it = elements.find(name);
    if (it == elements.end()) throw ConfigError("unknown element '" + name + "'");
    return it->second;
}

const PulseDef& MachineConfig::pulse(const std::string& name) const {
    auto it = pulse_library.find(name);
    if (it == pulse_library.end()) throw ConfigError("unknown pulse '" + name + "'");
    return it->second;
}

void MachineConfig::validate() const {
    for (const auto& [name, e] : elements) {
        if (e.can_read()) {
            if (e.time_of_flight < 0) throw ConfigError("element '" + name + "': negative time_of_flight");
            if (e.sampling_window <= 0)
                throw ConfigError("readout element '" + name + "' needs a positive sampling_window");
        }
        for (const auto& p : e.pulses)
            if (!pulse_library.count(p))
                throw ConfigError("element '" + name + "' references unknown pulse '" + p + "'");
    }
    for (const auto& [name, p] : pulse_library) p.validate();
}

void CostModel::validate() const {
    const Tick costs[] = {discrimination_cost, lut_cost,   arithmetic_cost_per_op,
                          bin2dec_cost_per_bit, matvec_cost_per_entry, param_update_cost,
                          issue_cost,           aggregation_c0, aggregation_c1, branch_cost};
    for (Tick c : costs)
        if (c < 0) throw ConfigError("cost model entries must be non-negative");
}

MachineConfig default_machine_config(int bank_size) {
    MachineConfig mc;

    PulseDef readout;
    readout.name = "readout_pulse";
    readout.envelope = EnvelopeKind::constant;
    readout.length_ns = 200;
    readout.if_freq_hz = 100e6;
    readout.amplitude = 0.25;
    mc.pulse_library[readout.name] = readout;

    PulseDef control;
    control.name = "control_pulse";
    control.envelope = EnvelopeKind::gaussian;
    control.sigma_ns = 4.0;
    control.length_ns = 20;
    control.if_freq_hz = 100e6;
    control.amplitude = 0.5;
    mc.pulse_library[control.name] = control;

    // pi / pi_half aliases of the control pulse shape.
    PulseDef pi = control;
    pi.name = "pi";
    mc.pulse_library[pi.name] = pi;
    PulseDef pi_half = control;
    pi_half.name = "pi_half";
    pi_half.amplitude = 0.25;
    mc.pulse_library[pi_half.name] = pi_half;

    auto add_readout = [&](const std::string& name) {
        ElementConfig e;
        e.name = name;
        e.role = ElementRole::both;
        e.if_freq_hz = 100e6;
        e.time_of_flight = 28;
        e.sampling_window = 200;
        e.pulses = {"readout_pulse"};
        mc.elements[name] = e;
    };
    auto add_control = [&](const std::string& name) {
        ElementConfig e;
        e.name = name;
        e.role = ElementRole::control;
        e.if_freq_hz = 100e6;
        e.pulses = {"control_pulse", "pi", "pi_half"};
        mc.elements[name] = e;
    };

    add_readout("readout_element");
    add_control("control_element");
    add_readout("resonator");
    add_control("qubit");
    for (int i = 0; i < bank_size; ++i) {
        add_readout("readout_element_" + std::to_string(i));
        add_control("control_element_" + std::to_string(i));
    }
    return mc;
}

}  // namespace qcs
