#pragma once

#include <cstdint>

namespace cohsim::rng {

// Finalizer from the splitmix64 generator; full-period bijective mix.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seed for the idx-th independent substream of a master seed. Substreams are
// decorrelated by mixing, so parallel chunks can each own a fresh engine and
// the merged result does not depend on how chunks are scheduled.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t idx) {
    return splitmix64(master ^ splitmix64(idx + 0x51ED2701FFULL));
}

}  // namespace cohsim::rng
