#pragma once

#include <cstdint>
#include <random>

namespace ufl {

// splitmix64 step; used to derive well-separated seeds for per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent engine for (seed, stream). Used so that trial t of a Monte
// Carlo run draws from its own stream: results are invariant under the
// number of worker threads and under reordering of trials.
inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= 0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL;
  std::uint64_t b = splitmix64(s);
  return std::mt19937_64(a ^ (b + 0x9e3779b97f4a7c15ULL + (stream << 1)));
}

// Uniform double in [0, 1): 53 random bits scaled by 2^-53. Hand-rolled so
// the stream is identical across standard library implementations.
inline double uniform01(std::mt19937_64& eng) {
  return (eng() >> 11) * 0x1.0p-53;
}

// Uniform double in [lo, hi).
inline double uniform_in(std::mt19937_64& eng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(eng);
}

}  // namespace ufl
