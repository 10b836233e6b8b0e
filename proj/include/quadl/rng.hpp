#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace quadl {

/// Stateless counter-based generator: every draw is a pure function of (seed, stream, counter),
/// so results do not depend on evaluation order or thread layout.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    h = splitmix64(h ^ stream);
    return splitmix64(h ^ (counter * 0xd1b54a32d192ed03ULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Standard normal by Box-Muller from two counter draws.
inline double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    double u1 = to_unit(counter_hash(seed, stream, 2 * counter));
    double u2 = to_unit(counter_hash(seed, stream, 2 * counter + 1));
    return std::sqrt(-2 * std::log1p(-u1)) * std::cos(2 * std::numbers::pi * u2);
}

}  // namespace quadl
