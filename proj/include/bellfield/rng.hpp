#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace bellfield::rng {

// Counter-based stream: value i of a splitmix64 sequence keyed by `seed`,
// evaluated directly at position i. Draws are a pure function of
// (seed, counter), so partial sums can be computed in any order or on any
// number of workers and still reproduce the single-threaded stream.
//
// Callers own the counter space of their seed: a sampler that consumes k
// draws per sample must index them as k*i, k*i+1, ..., k*i+k-1.

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + (counter + 1) * kGoldenGamma);
}

// Uniform on [0, 1), 53-bit resolution.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1]; safe under log().
inline double uniform01_positive(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>((at(seed, counter) >> 11) + 1) * 0x1.0p-53;
}

// Standard normal deviate, Box-Muller. Deviate `counter` consumes uniform
// draws 2*counter and 2*counter+1 of the same stream.
inline double normal(std::uint64_t seed, std::uint64_t counter) {
  const double u1 = uniform01_positive(seed, 2 * counter);
  const double u2 = uniform01(seed, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace bellfield::rng
