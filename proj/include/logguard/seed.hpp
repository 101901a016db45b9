#pragma once

#include <cstdint>
#include <random>

namespace logguard {

// Independent, reproducible sub-seed for (base, stream, index).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Stream identifiers for derive_seed.
enum class SeedStream : std::uint64_t {
    GenChunk = 1,
    Run = 2,
    Env = 3,
    Agent = 4,
};

inline std::uint64_t derive_seed(std::uint64_t base, SeedStream stream, std::uint64_t index) {
    return derive_seed(base, static_cast<std::uint64_t>(stream), index);
}

}  // namespace logguard
