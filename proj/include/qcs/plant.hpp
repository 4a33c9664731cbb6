#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/config.hpp"
#include "qcs/rng.hpp"
#include "qcs/signal.hpp"

namespace qcs {

struct PlantError : std::runtime_error {
    explicit PlantError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DriftModel {
    enum class Kind { constant_offset, sinusoid, random_walk };
    Kind kind = Kind::constant_offset;
    double offset_hz = 0.0;
    double amplitude_hz = 0.0;  // sinusoid
    double period_s = 1.0;      // sinusoid
    double step_std_hz = 0.0;   // random walk, per shot

    void validate() const;
};

// P_flip after n pi/2 pulses with relative amplitude error eps:
// 1/2 (1 - cos(n (pi/2) (1 + eps))). Exactly 1/2 for odd n at eps = 0.
double rabi_flip_probability(int n_pulses, double amp_error);

// Loopback model for the simulated QPU. One instance per run; it remembers
// every state it hands out so results can be recounted after the fact.
class PlantModel {
  public:
    enum class Kind { scripted, bernoulli, success_after_k, rabi, ramsey_drift };

    Kind kind = Kind::bernoulli;

    // scripted
    std::map<std::string, std::vector<int>> schedules;
    // bernoulli (p_by_element overrides the shared default)
    double p_excited = 0.5;
    std::map<std::string, double> p_by_element;
    // success_after_k: shots 0..k-1 read 0, shot k reads 1
    int64_t k = 0;
    // rabi
    double amp_error = 0.0;
    double amp_scale = 20.0;  // correction-to-error coupling, eps += delta / amp_scale
    // ramsey
    DriftModel drift;
    // rabi/ramsey plants inside a program run: the scenario sets the shot
    // probability before each measure
    double current_p = 0.5;

    std::map<std::string, std::vector<int>> history;

    void validate() const;

    // Draws (or looks up) the state for one measure and records it.
    int draw_state(const std::string& element, int64_t shot_index, CounterRng& rng);

    // Detuning at absolute time t; advances the random walk by one step.
    double drift_hz(double t_s, CounterRng& rng);

    void apply_amplitude_correction(double delta) { amp_error += delta / amp_scale; }

  private:
    double walk_offset_hz_ = 0.0;
};

PlantModel scripted_plant(std::map<std::string, std::vector<int>> schedules);
PlantModel bernoulli_plant(double p);
PlantModel success_after_k_plant(int64_t k);

// The readout response: an in-phase intermediate-frequency tone starting at
// emit_tick + time_of_flight, amplitude +0.5 for state 1 and -0.5 for state
// 0, so the demodulated value's sign is the state.
SampleBuffer plant_respond(PlantModel& plant, const ElementConfig& element, int64_t shot_index,
                           Tick emit_tick, CounterRng& rng);

}  // namespace qcs
