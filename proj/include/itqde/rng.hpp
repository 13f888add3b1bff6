// rng.hpp — counter-keyed deterministic random streams. Every draw site is
// keyed by (seed, stream ids), so fan-out order never changes the numbers.

#pragma once

#include <cstdint>

namespace itqde {

// SplitMix64 step.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t combine_keys(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2)));
}

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t key) : state_(mix64(key)) {}

    RandomStream(std::uint64_t seed, std::uint64_t s1)
        : RandomStream(combine_keys(seed, s1)) {}
    RandomStream(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2)
        : RandomStream(combine_keys(combine_keys(seed, s1), s2)) {}
    RandomStream(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2,
                 std::uint64_t s3)
        : RandomStream(combine_keys(combine_keys(combine_keys(seed, s1), s2), s3)) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ull;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~0ull) / bound);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % bound;
    }

  private:
    std::uint64_t state_;
};

}  // namespace itqde
