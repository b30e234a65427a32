#pragma once

#include <cstdint>
#include <array>

namespace usvswarm {

// xoshiro256** generator. Explicitly specified so that "same seed => same
// run" holds as a cross-implementation contract. Seeding expands a single
// 64-bit seed through splitmix64.
class Rng {
public:
    explicit Rng(uint64_t seed) { reseed(seed); }

    void reseed(uint64_t seed);

    uint64_t next_u64();

    // Uniform in [0, 1) with 53 bits of mantissa.
    double uniform();

    // Uniform in [lo, hi).
    double uniform(double lo, double hi);

    // Uniform integer in [0, n). n must be > 0.
    uint64_t uniform_index(uint64_t n);

    // Standard normal via Box-Muller. Consumes two uniforms per call.
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    std::array<uint64_t, 4> state() const { return s_; }
    void set_state(const std::array<uint64_t, 4>& s) { s_ = s; }

    // Derives an independent stream seed from (base, index); used to give
    // every episode / network its own deterministic stream.
    static uint64_t derive_seed(uint64_t base, uint64_t index);

private:
    std::array<uint64_t, 4> s_{};
};

}  // namespace usvswarm
