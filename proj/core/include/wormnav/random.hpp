#pragma once

#include <cstdint>
#include <random>

namespace wormnav {

// Per-episode random stream. Episodes never share one.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
    return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

} // namespace wormnav
