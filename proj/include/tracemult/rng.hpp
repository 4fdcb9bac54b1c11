#pragma once

// Deterministic randomness. Only the raw mt19937_64 stream (fixed by the
// standard) is used; bounded draws are done here so results do not depend
// on the standard library's distribution implementations.

#include <cstdint>
#include <random>

namespace tracemult {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31U);
}

// Stream for sub-task `index` of a run seeded with `seed`:
// mt19937_64(splitmix64(seed ^ splitmix64(index))).
inline std::mt19937_64 derive_stream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(index)));
}

// Uniform in [0, bound), bound > 0, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t v;
  do {
    v = gen();
  } while (v >= limit);
  return v % bound;
}

inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11U) * 0x1.0p-53;
}

}  // namespace tracemult
