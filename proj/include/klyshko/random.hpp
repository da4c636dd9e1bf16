#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace klyshko {

/// All stochastic routines draw from std::mt19937_64. Child streams (restarts,
/// trials, correlator terms) are seeded with derive_seed(seed, index) so that
/// results do not depend on execution order or worker count.
using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 20011122ULL;

/// SplitMix64 finalizer applied to (seed, counter).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) built from the top 53 bits, so draws are identical
/// across standard library implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on uniform01.
inline double standard_normal(Rng& rng) {
  constexpr double two_pi = 6.283185307179586476925286766559;
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

/// Haar-uniform point on the unit 2-sphere.
inline Eigen::Vector3d random_unit_vector(Rng& rng) {
  for (;;) {
    Eigen::Vector3d v(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
}

}  // namespace klyshko
