#pragma once

#include <cstdint>

// Small deterministic RNG for property-style tests (no global state).
struct XorShift64 {
    std::uint64_t s;

    explicit XorShift64(std::uint64_t seed = 0x9e3779b97f4a7c15ull) : s(seed) {}

    std::uint64_t next() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        return s;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }
};
