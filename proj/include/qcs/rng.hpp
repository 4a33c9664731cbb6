#pragma once

#include <cstdint>

namespace qcs {

// Counter-based generator: output i of stream s under seed k is a pure
// function hash(k, s, i), so adding instrumentation or reordering draws in
// one stream can never perturb another.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream), counter_(0) {}

    uint64_t next_u64() {
        uint64_t x = seed_ ^ (stream_ * 0x9e3779b97f4a7c15ull);
        x += 0x9e3779b97f4a7c15ull * ++counter_;
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ull;
        x ^= x >> 27;
        x *= 0x94d049bb133111ebull;
        x ^= x >> 31;
        return x;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    // Standard normal via Box-Muller (one value per call, second discarded
    // so the draw count stays a pure function of call count).
    double next_normal();

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

  private:
    uint64_t seed_;
    uint64_t stream_;
    uint64_t counter_;
};

// Stream ids used across the simulator.
namespace rng_stream {
constexpr uint64_t plant = 1;
constexpr uint64_t bm21_matrix = 2;
constexpr uint64_t scenario = 3;
}  // namespace rng_stream

}  // namespace qcs
