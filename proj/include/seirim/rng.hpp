#pragma once

#include <cstdint>
#include <random>

namespace seirim {

// Seeded draws for property checks and the CLI selfcheck. Distributions are
// hand-rolled from raw 64-bit words so sequences do not depend on the
// standard library's unspecified distribution algorithms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1) with 53 bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Log-uniform over [lo, hi], lo > 0.
    double log_uniform(double lo, double hi);

    std::uint64_t next_word() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace seirim
