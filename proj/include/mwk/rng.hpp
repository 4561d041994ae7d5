#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace mwk {

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Child seed for a labelled sub-stream, e.g. derive_seed(seed, {replicate, 1}).
// Streams depend only on (seed, labels), never on execution order.
constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                    std::initializer_list<std::uint64_t> labels) noexcept {
  std::uint64_t h = mix64(seed);
  for (std::uint64_t l : labels) h = mix64(h ^ mix64(l + 0x632BE59BD9B4E019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> labels) {
  return Rng(derive_seed(seed, labels));
}

}  // namespace mwk
