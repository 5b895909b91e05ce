#pragma once

#include <cmath>
#include <cstdint>

namespace supbound::rng {

/// splitmix64 finalizer; full-avalanche 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

/// Counter-based word: a pure function of (seed, replication, atom, draw index).
/// Streams never depend on evaluation order, so parallel replications reproduce
/// the serial output exactly.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t replication,
                                  std::uint64_t atom, std::uint64_t idx) {
    std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
    h = mix64(h + 0x9e3779b97f4a7c15ULL * (replication + 1));
    h = mix64(h ^ (0xc2b2ae3d27d4eb4fULL * (atom + 1)));
    h = mix64(h + 0x165667b19e3779f9ULL * (idx + 1));
    return h;
}

/// Uniform on (0,1), never returning an endpoint.
inline double uniform01(std::uint64_t word) {
    return static_cast<double>(word >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

/// Standard normal draw for stream (seed, replication, atom), via Box-Muller.
inline double standard_normal(std::uint64_t seed, std::uint64_t replication, std::uint64_t atom) {
    const double u1 = uniform01(counter_word(seed, replication, atom, 0));
    const double u2 = uniform01(counter_word(seed, replication, atom, 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

} // namespace supbound::rng
