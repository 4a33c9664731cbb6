#include "qcs/plant.hpp"

#include <cmath>

namespace qcs {

void DriftModel::validate() const {
    if (kind == Kind::sinusoid && period_s <= 0) throw PlantError("drift period must be positive");
    if (kind == Kind::random_walk && step_std_hz < 0)
        throw PlantError("drift step_std must be non-negative");
}

double rabi_flip_probability(int n_pulses, double amp_error) {
    if (n_pulses <= 0 || n_pulses % 2 == 0)
        throw PlantError("flip probability is defined for an odd pulse count");
    if (amp_error == 0.0) return 0.5;  // odd quarter-turns land exactly on the equator
    return 0.5 * (1.0 - std::cos(n_pulses * (M_PI / 2.0) * (1.0 + amp_error)));
}

void PlantModel::validate() const {
    auto check_p = [](double p) {
        if (p < 0.0 || p > 1.0) throw PlantError("probability out of [0, 1]");
    };
    check_p(p_excited);
    check_p(current_p);
    for (const auto& [e, p] : p_by_element) check_p(p);
    if (k < 0) throw PlantError("success shot index must be non-negative");
    drift.validate();
}

int PlantModel::draw_state(const std::string& element, int64_t shot_index, CounterRng& rng) {
    int state = 0;
    switch (kind) {
        case Kind::scripted: {
            auto it = schedules.find(element);
            if (it == schedules.end() || shot_index >= static_cast<int64_t>(it->second.size()))
                throw PlantError("scripted schedule exhausted for element '" + element + "'");
            state = it->second[static_cast<size_t>(shot_index)] ? 1 : 0;
            break;
        }
        case Kind::bernoulli: {
            auto it = p_by_element.find(element);
            double p = it != p_by_element.end() ? it->second : p_excited;
            state = rng.bernoulli(p) ? 1 : 0;
            break;
        }
        case Kind::success_after_k:
            state = shot_index >= k ? 1 : 0;
            break;
        case Kind::rabi:
        case Kind::ramsey_drift:
            state = rng.bernoulli(current_p) ? 1 : 0;
            break;
    }
    auto& hist = history[element];
    if (shot_index >= static_cast<int64_t>(hist.size())) hist.resize(static_cast<size_t>(shot_index) + 1, -1);
    hist[static_cast<size_t>(shot_index)] = state;
    return state;
}

double PlantModel::drift_hz(double t_s, CounterRng& rng) {
    switch (drift.kind) {
        case DriftModel::Kind::constant_offset:
            return drift.offset_hz;
        case DriftModel::Kind::sinusoid:
            return drift.amplitude_hz * std::sin(2.0 * M_PI * t_s / drift.period_s);
        case DriftModel::Kind::random_walk:
            walk_offset_hz_ += drift.step_std_hz * rng.next_normal();
            return walk_offset_hz_;
    }
    return 0.0;
}

PlantModel scripted_plant(std::map<std::string, std::vector<int>> schedules) {
    PlantModel p;
    p.kind = PlantModel::Kind::scripted;
    p.schedules = std::move(schedules);
    return p;
}

PlantModel bernoulli_plant(double p_excited) {
    PlantModel p;
    p.kind = PlantModel::Kind::bernoulli;
    p.p_excited = p_excited;
    return p;
}

PlantModel success_after_k_plant(int64_t k) {
    PlantModel p;
    p.kind = PlantModel::Kind::success_after_k;
    p.k = k;
    return p;
}

SampleBuffer plant_respond(PlantModel& plant, const ElementConfig& element, int64_t shot_index,
                           Tick emit_tick, CounterRng& rng) {
    int state = plant.draw_state(element.name, shot_index, rng);
    double amp = state ? 0.5 : -0.5;

    SampleBuffer buf;
    buf.t0 = emit_tick + element.time_of_flight;
    buf.samples.reserve(static_cast<size_t>(element.sampling_window));
    for (Tick i = 0; i < element.sampling_window; ++i) {
        double t_ns = static_cast<double>(buf.t0 + i);
        double v = amp * std::cos(2.0 * M_PI * element.if_freq_hz * t_ns * 1e-9);
        bool sat = false;
        buf.samples.push_back(Fixed::from_double(v, &sat));
        if (sat) buf.saturated = true;
    }
    return buf;
}

}  // namespace qcs
