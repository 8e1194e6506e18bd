#pragma once

#include <cstdint>
#include <random>

#include "zspose/geometry.hpp"

namespace zspose {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; stable across platforms.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  // modulo bias is negligible for n << 2^64
  return rng() % n;
}

/// Standard normal via Box-Muller (consumes two uniforms per call).
double gaussian(Rng& rng);

Vec3 random_unit_vector(Rng& rng);
Vec3 random_in_ball(Rng& rng, double radius);

/// Haar-uniform rotation (Shoemake's subgroup algorithm on quaternions).
Rotation random_rotation(Rng& rng);

}  // namespace zspose
