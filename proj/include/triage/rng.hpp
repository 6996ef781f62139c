#pragma once

#include <cstdint>
#include <random>

namespace triage {

// Finalizer-style bit mixer. Full avalanche, bijective, mix64(x) != x for
// every input we care about; used to derive independent substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

// Deterministic engine for the index-th independent unit of work under a
// master seed. Identical (seed, index) gives an identical stream regardless
// of which thread runs it, which is what makes parallel drivers reproducible.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
    return std::mt19937_64(mix64(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL)));
}

// Unbiased integer in [0, n). Multiply-shift rejection; n must be > 0.
inline std::uint64_t uniformIndex(std::mt19937_64& rng, std::uint64_t n) {
    std::uint64_t x = rng();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
        std::uint64_t threshold = (0 - n) % n;
        while (low < threshold) {
            x = rng();
            m = static_cast<__uint128_t>(x) * n;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

// Real in [0, 1) with 53 random bits.
inline double uniformReal(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Fisher-Yates using uniformIndex so shuffles are engine-stable across
// platforms (std::shuffle's draw pattern is not pinned by the standard).
template <typename T>
void deterministicShuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(uniformIndex(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace triage
