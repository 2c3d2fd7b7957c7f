#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace pqcnn {

// Deterministic random source. All randomness in the library flows through
// this wrapper: the mt19937_64 output sequence is pinned by the standard,
// and the draws below avoid std distribution objects, whose output is
// implementation-defined. Same seed, same results, bit for bit.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    int next_bit() { return static_cast<int>(engine_() & 1u); }

    // Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
    std::uint64_t next_index(std::uint64_t bound) {
        if (bound == 0)
            throw std::invalid_argument("Rng::next_index: bound must be positive");
        constexpr std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t rem = (max % bound + 1) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (rem == 0 || r <= max - rem)
                return r % bound;
        }
    }

    // Uniform double in [0, 1) with 53 random mantissa bits.
    double next_real() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Symmetric uniform double in (-limit, limit).
    double next_symmetric(double limit) { return (2.0 * next_real() - 1.0) * limit; }

private:
    std::mt19937_64 engine_;
};

} // namespace pqcnn
