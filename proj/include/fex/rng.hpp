#pragma once

#include <cstdint>
#include <random>

namespace fex {

// Deterministic RNG for seeded suites.  mt19937_64 has a fixed output
// sequence by standard, so results are reproducible across platforms;
// std::uniform_int_distribution is not, hence the modulo draw.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t raw() { return engine_(); }

    // Uniform-ish draw in [0, n); n must be positive.
    uint64_t below(uint64_t n) { return engine_() % n; }

    // Draw in [lo, hi] inclusive.
    uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

    bool coin() { return (engine_() & 1) != 0; }

private:
    std::mt19937_64 engine_;
};

}  // namespace fex
