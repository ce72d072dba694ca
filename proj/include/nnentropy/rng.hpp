#pragma once

#include <cstdint>

namespace nnentropy {

// Counter-based generator built on the SplitMix64 finalizer. Every value is a
// pure function of (key, counter), so streams are reproducible bit-for-bit on
// any platform and can be consumed in any order.
//
//   at(key, c) = mix64(key + (c + 1) * 0x9E3779B97F4A7C15)
//   derive(master, stream) = mix64(master ^ mix64(stream + 0x9E3779B97F4A7C15))
//   uniform(key, c) = (at(key, c) >> 11) * 2^-53
namespace rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGolden);
}

constexpr std::uint64_t derive(std::uint64_t master, std::uint64_t stream) noexcept {
  return mix64(master ^ mix64(stream + kGolden));
}

// Uniform double in [0, 1) with 53 random bits.
constexpr double uniform(std::uint64_t key, std::uint64_t counter) noexcept {
  return static_cast<double>(at(key, counter) >> 11) * 0x1.0p-53;
}

}  // namespace rng

struct Seed {
  std::uint64_t master = 0;
};

// Seed of point i within a sample.
inline Seed point_seed(Seed s, std::uint64_t i) noexcept { return {rng::derive(s.master, i)}; }

// Seed of Monte Carlo trial t; a separate domain from point seeds.
inline Seed trial_seed(Seed s, std::uint64_t t) noexcept {
  return {rng::derive(rng::derive(s.master, 0x747269616C000000ULL), t)};
}

}  // namespace nnentropy
