#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mixssl {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Derives a stream seed from a root seed and a path of integer keys
/// (grid index, iteration, observation, ...). Stable across platforms.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> keys);

inline Engine make_engine(std::uint64_t seed) {
  return Engine(seed);
}

}  // namespace mixssl
