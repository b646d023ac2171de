#pragma once

#include <cstdint>
#include <random>

namespace tqst {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; mixes a seed with a stream tag into an independent seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream) { return Rng(derive_seed(seed, stream)); }

// Stream tags for the independent consumers of one announced seed.
inline constexpr std::uint64_t kStreamDiagonal = 1;
inline constexpr std::uint64_t kStreamMle = 2;
inline constexpr std::uint64_t kStreamState = 3;
inline constexpr std::uint64_t kStreamThresholdRuns = 4;
inline constexpr std::uint64_t kStreamSettings = 5;
inline constexpr std::uint64_t kStreamTargetBase = 1000;

}  // namespace tqst
