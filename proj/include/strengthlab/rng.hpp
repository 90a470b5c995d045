#pragma once

#include <cstdint>

namespace strengthlab {

// SplitMix64 finalizer. All randomness in the project flows through
// counter-based streams built on this mix, so results are a pure function of
// (seed, stream, counter) and independent of scheduling.
constexpr uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

constexpr uint64_t ctr_value(uint64_t seed, uint64_t stream, uint64_t ctr) {
    uint64_t key = mix64(seed + 0x9e3779b97f4a7c15ull * (stream + 1));
    return mix64(key ^ (0xbf58476d1ce4e5b9ull * (ctr + 1)));
}

// Maps a raw 64-bit value into [0, bound) by the high-multiply trick.
constexpr uint64_t bounded(uint64_t raw, uint64_t bound) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(raw) * bound) >> 64);
}

}  // namespace strengthlab
