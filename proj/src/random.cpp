#include "zspose/random.hpp"

#include <cmath>

namespace zspose {

double gaussian(Rng& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Vec3 random_unit_vector(Rng& rng) {
  const double z = uniform_range(rng, -1.0, 1.0);
  const double phi = uniform_range(rng, 0.0, 2.0 * M_PI);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {r * std::cos(phi), r * std::sin(phi), z};
}

Vec3 random_in_ball(Rng& rng, double radius) {
  const double r = radius * std::cbrt(uniform01(rng));
  return r * random_unit_vector(rng);
}

Rotation random_rotation(Rng& rng) {
  const double u1 = uniform01(rng);
  const double u2 = uniform_range(rng, 0.0, 2.0 * M_PI);
  const double u3 = uniform_range(rng, 0.0, 2.0 * M_PI);
  const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
  const Eigen::Quaterniond q(a * std::sin(u2), a * std::cos(u2), b * std::sin(u3),
                             b * std::cos(u3));
  return Rotation(q.toRotationMatrix());
}

}  // namespace zspose
