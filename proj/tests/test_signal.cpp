#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qcs/plant.hpp"
#include "qcs/rng.hpp"
#include "qcs/signal.hpp"

using namespace qcs;

namespace {

PulseDef constant_pulse(double amp, Tick len = 200, double f = 100e6) {
    PulseDef p;
    p.name = "t";
    p.envelope = EnvelopeKind::constant;
    p.length_ns = len;
    p.if_freq_hz = f;
    p.amplitude = amp;
    return p;
}

// independent double-precision reference for the demod sum
double reference_demod(const SampleBuffer& buf, const DemodSpec& spec) {
    double acc = 0;
    for (Tick i = 0; i < spec.sampling_window; ++i)
        acc += std::cos(2 * M_PI * spec.if_freq_hz * (double)(buf.t0 + i) * 1e-9) *
               buf.samples[(size_t)i].to_double();
    return acc * 2.0 / (double)spec.sampling_window;
}

}  // namespace

TEST_CASE("gaussian envelope shape") {
    auto env = gaussian_envelope(4.0, 20);
    REQUIRE(env.size() == 20);
    CHECK(env[9] == doctest::Approx(1.0));
    CHECK(env[10] == doctest::Approx(1.0));
    for (int i = 0; i < 20; ++i) CHECK(env[i] == doctest::Approx(env[19 - i]));

    auto one = gaussian_envelope(4.0, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0] == doctest::Approx(1.0));

    auto e8 = gaussian_envelope(2.0, 8);
    CHECK(e8[1] == doctest::Approx(e8[6]));

    CHECK_THROWS_AS(gaussian_envelope(0.0, 20), SignalError);
    CHECK_THROWS_AS(gaussian_envelope(4.0, 0), SignalError);
}

TEST_CASE("synthesis of the in-phase tone") {
    auto zero = synthesize(constant_pulse(0.0, 20), 0.0, 0);
    for (auto s : zero.samples) CHECK(s.raw() == 0);

    auto tone = synthesize(constant_pulse(1.0, 20), 0.0, 0);
    CHECK(tone.samples[0].to_double() == doctest::Approx(1.0));
    CHECK(tone.samples[5].to_double() == doctest::Approx(-1.0));

    auto flipped = synthesize(constant_pulse(1.0, 20), 0.5, 0);
    for (size_t i = 0; i < 20; ++i)
        CHECK(flipped.samples[i].to_double() == doctest::Approx(-tone.samples[i].to_double()).epsilon(1e-6));
}

TEST_CASE("demodulation reference points") {
    DemodSpec spec;
    spec.if_freq_hz = 100e6;
    spec.sampling_window = 200;

    SampleBuffer zero;
    zero.t0 = 0;
    zero.samples.assign(200, Fixed());
    CHECK(demodulate(zero, spec).raw() == 0);

    // full-scale in-phase tone -> 1.0
    auto tone = synthesize(constant_pulse(1.0), 0.0, 0);
    CHECK(demodulate(tone, spec).to_double() == doctest::Approx(1.0).epsilon(1e-6));

    // DC input integrates to zero over 20 full IF periods
    SampleBuffer dc;
    dc.t0 = 0;
    dc.samples.assign(200, Fixed::from_double(1.0));
    CHECK(std::abs(demodulate(dc, spec).to_double()) < 1e-6);

    SampleBuffer shorter;
    shorter.t0 = 0;
    shorter.samples.assign(100, Fixed());
    CHECK_THROWS_AS(demodulate(shorter, spec), SignalError);
}

TEST_CASE("demodulation matches the double-precision reference") {
    DemodSpec spec;
    spec.if_freq_hz = 100e6;
    spec.sampling_window = 200;
    CounterRng rng(17, 95);
    for (int trial = 0; trial < 1000; ++trial) {
        SampleBuffer buf;
        buf.t0 = (Tick)(rng.next_u64() % 5000);
        buf.samples.reserve(200);
        for (int i = 0; i < 200; ++i)
            buf.samples.push_back(Fixed::from_double((rng.next_double() - 0.5) * 2.0));
        double ref = reference_demod(buf, spec);
        double got = demodulate(buf, spec).to_double();
        CHECK(std::abs(got - ref) <= std::max(1e-3 * std::abs(ref), 1e-6));
    }
}

TEST_CASE("demodulation is linear in the input buffer") {
    DemodSpec spec;
    spec.if_freq_hz = 100e6;
    spec.sampling_window = 200;
    CounterRng rng(23, 94);
    for (int trial = 0; trial < 50; ++trial) {
        SampleBuffer s, r, combo;
        Tick t0 = (Tick)(rng.next_u64() % 1000);
        s.t0 = r.t0 = combo.t0 = t0;
        for (int i = 0; i < 200; ++i) {
            double a = (rng.next_double() - 0.5);
            double b = (rng.next_double() - 0.5);
            s.samples.push_back(Fixed::from_double(a));
            r.samples.push_back(Fixed::from_double(b));
            combo.samples.push_back(Fixed::from_double(2 * a + 3 * b));
        }
        double lhs = demodulate(combo, spec).to_double();
        double rhs = 2 * demodulate(s, spec).to_double() + 3 * demodulate(r, spec).to_double();
        CHECK(std::abs(lhs - rhs) <= 6.0 * 200.0 / (1 << 28));
    }
}

TEST_CASE("matched filter peaks at zero frame phase") {
    DemodSpec spec;
    spec.if_freq_hz = 100e6;
    spec.sampling_window = 200;
    double best = -1e9;
    int best_k = -1;
    for (int k = 0; k < 64; ++k) {
        auto buf = synthesize(constant_pulse(1.0), (double)k / 64.0, 0);
        double v = demodulate(buf, spec).to_double();
        if (v > best) {
            best = v;
            best_k = k;
        }
    }
    CHECK(best_k == 0);
}

TEST_CASE("plant responses discriminate by sign") {
    auto mc = default_machine_config(2);
    const auto& elem = mc.element("readout_element");
    DemodSpec spec{elem.if_freq_hz, elem.sampling_window, elem.time_of_flight};
    CounterRng rng(9, rng_stream::plant);

    auto p1 = scripted_plant({{"readout_element", {1, 0, 1}}});
    for (int shot = 0; shot < 3; ++shot) {
        auto buf = plant_respond(p1, elem, shot, 100 + 37 * shot, rng);
        CHECK(buf.t0 == 100 + 37 * shot + elem.time_of_flight);
        double v = demodulate(buf, spec).to_double();
        int state = p1.schedules["readout_element"][shot];
        CHECK((v > 0) == (state == 1));
        CHECK(std::abs(std::abs(v) - 0.5) < 1e-3);
    }
    CHECK_THROWS_AS(plant_respond(p1, elem, 3, 500, rng), PlantError);

    auto ones = bernoulli_plant(1.0);
    for (int shot = 0; shot < 5; ++shot) {
        auto buf = plant_respond(ones, elem, shot, 60 * shot, rng);
        CHECK(demodulate(buf, spec).to_double() > 0);
    }
}

TEST_CASE("bernoulli plant frequency is within binomial bounds") {
    auto mc = default_machine_config(1);
    const auto& elem = mc.element("readout_element");
    CounterRng rng(1234, rng_stream::plant);
    const double p = 0.3;
    auto plant = bernoulli_plant(p);
    const int n = 10000;
    int ones = 0;
    for (int shot = 0; shot < n; ++shot) ones += plant.draw_state("readout_element", shot, rng);
    double sigma = std::sqrt(p * (1 - p) * n);
    CHECK(std::abs(ones - p * n) < 5 * sigma);
    // history recount matches
    int recount = 0;
    for (int s : plant.history["readout_element"]) recount += s;
    CHECK(recount == ones);
}

TEST_CASE("flip probability model") {
    CHECK(rabi_flip_probability(5, 0.0) == doctest::Approx(0.5));
    CHECK(rabi_flip_probability(7, 0.0) == doctest::Approx(0.5));
    CHECK(rabi_flip_probability(5, 0.2) == doctest::Approx(1.0));
    double eps = 0.02;
    double expect = 0.5 * (1.0 - std::cos(7.0 * (M_PI / 2.0) * 1.02));
    CHECK(rabi_flip_probability(7, eps) == doctest::Approx(expect).epsilon(1e-12));
    CHECK_THROWS_AS(rabi_flip_probability(4, 0.0), PlantError);
}

TEST_CASE("success-after-k schedule") {
    auto plant = success_after_k_plant(3);
    CounterRng rng(0, rng_stream::plant);
    for (int shot = 0; shot < 3; ++shot) CHECK(plant.draw_state("r", shot, rng) == 0);
    CHECK(plant.draw_state("r", 3, rng) == 1);
    CHECK(plant.draw_state("r", 4, rng) == 1);
}

TEST_CASE("drift models") {
    PlantModel p;
    p.kind = PlantModel::Kind::ramsey_drift;
    CounterRng rng(0, rng_stream::plant);

    p.drift.kind = DriftModel::Kind::constant_offset;
    p.drift.offset_hz = 250.0;
    CHECK(p.drift_hz(1.0, rng) == 250.0);

    PlantModel s = p;
    s.drift.kind = DriftModel::Kind::sinusoid;
    s.drift.amplitude_hz = 100.0;
    s.drift.period_s = 4.0;
    CHECK(s.drift_hz(1.0, rng) == doctest::Approx(100.0));
    CHECK(s.drift_hz(2.0, rng) == doctest::Approx(0.0).epsilon(1e-9));

    PlantModel w = p;
    w.drift.kind = DriftModel::Kind::random_walk;
    w.drift.step_std_hz = 10.0;
    double prev = 0;
    for (int i = 0; i < 5; ++i) {
        double v = w.drift_hz(0.0, rng);
        CHECK(v != prev);
        prev = v;
    }
}
