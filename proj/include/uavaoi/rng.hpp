#pragma once

#include <cstdint>
#include <random>

namespace uavaoi {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent seed streams from one base seed.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of `base`. Distinct streams never share a seed
/// for the same base (mix_seed is a bijection).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    return mix_seed(mix_seed(base) ^ mix_seed(stream + 0x5bd1e995ULL));
}

} // namespace uavaoi
