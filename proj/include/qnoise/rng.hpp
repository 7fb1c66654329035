#pragma once

#include <cstdint>
#include <random>

namespace qnoise {

using Rng = std::mt19937_64;

// Independent generator for (seed, stream, substream). Streams are derived from the
// counter values only, so results do not depend on scheduling order.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t sub = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      static_cast<std::uint32_t>(sub), static_cast<std::uint32_t>(sub >> 32),
                      0x9e3779b9u};
    return Rng(seq);
}

inline double unit_normal(Rng& rng) {
    // fresh distribution per call: no cached deviate leaks between streams
    return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline double unit_uniform(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace qnoise
