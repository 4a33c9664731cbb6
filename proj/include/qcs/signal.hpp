#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qcs/fixed.hpp"

namespace qcs {

using Tick = int64_t;  // 1 tick = 1 ns = 1 sample at 1 GS/s

struct SignalError : std::runtime_error {
    explicit SignalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class EnvelopeKind { gaussian, constant };

struct PulseDef {
    std::string name;
    EnvelopeKind envelope = EnvelopeKind::constant;
    double sigma_ns = 0.0;  // gaussian only
    Tick length_ns = 0;
    double if_freq_hz = 100e6;
    double amplitude = 1.0;  // in [-1, 1]

    void validate() const;
};

// One fixed-point sample per tick, starting at t0.
struct SampleBuffer {
    Tick t0 = 0;
    std::vector<Fixed> samples;
    bool saturated = false;
};

struct DemodSpec {
    double if_freq_hz = 100e6;
    Tick sampling_window = 0;  // N
    Tick time_of_flight = 0;
};

// Unit-peak envelope centered at (length-1)/2.
std::vector<double> gaussian_envelope(double sigma_ns, Tick length_ns);

// samples[i] = amplitude * env[i] * cos(2*pi*(f_if*(t0+i)*1ns + frame_phase)),
// quantized to Q3.28. frame_phase is in turns.
SampleBuffer synthesize(const PulseDef& p, double frame_phase_turns, Tick t0,
                        double amp_scale = 1.0);

// Windowed cosine-kernel sum over the first spec.sampling_window samples of
// buf, using absolute controller time for the kernel phase, normalized by
// 2/N so a full-scale in-phase tone maps to 1.0.
Fixed demodulate(const SampleBuffer& buf, const DemodSpec& spec, bool* saturated = nullptr);

}  // namespace qcs
