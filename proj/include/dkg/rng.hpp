#pragma once

// Counter-based random stream: every draw is a pure function of
// (seed, stream, counter), so results never depend on call order or on how
// work is split across threads.
//
//   key    = seed ^ (0x9E3779B97F4A7C15 * (stream + 1))
//   bits   = splitmix64(key + 0xD1B54A32D192ED03 * counter)
//   double = (bits >> 11) * 2^-53          ∈ [0, 1)

#include <cstdint>

namespace dkg::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  const std::uint64_t key = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
  return splitmix64(key + 0xD1B54A32D192ED03ULL * counter);
}

constexpr double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(bits(seed, stream, counter) >> 11) * 0x1.0p-53;
}

/// Uniform on [lo, hi).
constexpr double uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter, double lo,
                         double hi) {
  return lo + (hi - lo) * uniform01(seed, stream, counter);
}

}  // namespace dkg::rng
