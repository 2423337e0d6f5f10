#pragma once
// Counter-based deterministic random numbers. Every draw is a pure function
// of (seed, stream, counter), so chunked or parallel consumers produce the
// same sequences regardless of thread count or evaluation order.

#include <cstdint>
#include <cmath>

namespace icb {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t z) {
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27; z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}
} // namespace detail

// 64 random bits at position (seed, stream, counter).
inline std::uint64_t rand_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const std::uint64_t golden = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key = detail::splitmix64(seed + golden * (stream + 1));
    return detail::splitmix64(key + golden * (counter + 1));
}

// Uniform double in [0, 1).
inline double rand_u01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return static_cast<double>(rand_bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double rand_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                           double lo, double hi) {
    return lo + (hi - lo) * rand_u01(seed, stream, counter);
}

// Standard normal via Box-Muller; consumes counters 2k and 2k+1 of the stream.
inline double rand_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
    // u1 in (0,1] so log(u1) is finite
    double u1 = (static_cast<double>(rand_bits(seed, stream, 2 * k) >> 11) + 1.0) * 0x1.0p-53;
    double u2 = rand_u01(seed, stream, 2 * k + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace icb
