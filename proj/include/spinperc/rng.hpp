#pragma once

#include <cstdint>

namespace spinperc {

// SplitMix64 finalizer; used for pair-keyed edge sampling and substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

// Top 53 bits mapped to [0,1).
inline double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Seed for the b-th block of a partitioned Monte Carlo run.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t block) {
    return hash_combine(seed, block);
}

} // namespace spinperc
