#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace questmc {

/// The single random source type used by the engine, agents and search.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Per-game seed: the (index + 1)-th output of a SplitMix64 stream started at
/// `master_seed`. Pure function of its arguments, so game i gets the same
/// stream no matter which worker plays it.
constexpr std::uint64_t seed_for_game(std::uint64_t master_seed, std::uint64_t game_index) {
  return mix64(master_seed + (game_index + 1) * 0x9e3779b97f4a7c15ULL);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

}  // namespace questmc
