#include "qcs/signal.hpp"

#include <cmath>
#include <numbers>

namespace qcs {

namespace {
constexpr double kTickSeconds = 1e-9;
}

void PulseDef::validate() const {
    if (length_ns <= 0) throw SignalError("pulse '" + name + "': length must be positive");
    if (envelope == EnvelopeKind::gaussian && sigma_ns <= 0.0)
        throw SignalError("pulse '" + name + "': gaussian sigma must be positive");
    if (amplitude < -1.0 || amplitude > 1.0)
        throw SignalError("pulse '" + name + "': amplitude outside [-1, 1]");
}

std::vector<double> gaussian_envelope(double sigma_ns, Tick length_ns) {
    if (sigma_ns <= 0.0 || length_ns <= 0) throw SignalError("invalid gaussian envelope parameters");
    std::vector<double> env(static_cast<size_t>(length_ns));
    const double center = static_cast<double>(length_ns - 1) / 2.0;
    for (Tick i = 0; i < length_ns; ++i) {
        double d = (static_cast<double>(i) - center) / sigma_ns;
        env[static_cast<size_t>(i)] = std::exp(-0.5 * d * d);
    }
    // Unit peak. For even lengths the two middle samples share the maximum.
    double peak = env[static_cast<size_t>(length_ns / 2)];
    for (auto& v : env) v /= peak;
    return env;
}

SampleBuffer synthesize(const PulseDef& p, double frame_phase_turns, Tick t0, double amp_scale) {
    p.validate();
    SampleBuffer buf;
    buf.t0 = t0;
    buf.samples.resize(static_cast<size_t>(p.length_ns));
    std::vector<double> env;
    if (p.envelope == EnvelopeKind::gaussian)
        env = gaussian_envelope(p.sigma_ns, p.length_ns);
    const double two_pi = 2.0 * std::numbers::pi;
    for (Tick i = 0; i < p.length_ns; ++i) {
        double e = p.envelope == EnvelopeKind::gaussian ? env[static_cast<size_t>(i)] : 1.0;
        double phase = p.if_freq_hz * static_cast<double>(t0 + i) * kTickSeconds + frame_phase_turns;
        double v = p.amplitude * amp_scale * e * std::cos(two_pi * phase);
        buf.samples[static_cast<size_t>(i)] = Fixed::from_double(v, &buf.saturated);
    }
    return buf;
}

Fixed demodulate(const SampleBuffer& buf, const DemodSpec& spec, bool* saturated) {
    if (spec.sampling_window <= 0) throw SignalError("demod: sampling window must be positive");
    if (static_cast<Tick>(buf.samples.size()) < spec.sampling_window)
        throw SignalError("demod: window overruns buffer (WindowOverrun)");
    const double two_pi = 2.0 * std::numbers::pi;
    double acc = 0.0;
    for (Tick i = 0; i < spec.sampling_window; ++i) {
        double t = static_cast<double>(buf.t0 + i) * kTickSeconds;
        acc += std::cos(two_pi * spec.if_freq_hz * t) * buf.samples[static_cast<size_t>(i)].to_double();
    }
    acc *= 2.0 / static_cast<double>(spec.sampling_window);
    return Fixed::from_double(acc, saturated);
}

}  // namespace qcs
