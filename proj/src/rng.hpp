#pragma once

#include <cstdint>
#include <random>

namespace corr1d {

using Rng = std::mt19937_64;

// Standard splitmix64 mixing step.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Published per-task seed derivation: results are accumulated by task index,
// never by completion order, so ensemble output is bit-identical for any
// worker count.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    return splitmix64(splitmix64(master_seed) ^ (0x9E3779B97F4A7C15ull * (index + 1)));
}

}  // namespace corr1d
