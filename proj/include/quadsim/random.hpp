#pragma once

#include <cmath>

#include "quadsim/types.hpp"

namespace quadsim {

/// Haar-uniform rotation (Shoemake's subgroup algorithm).
inline Mat3 uniform_rotation(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double u1 = u(rng);
  const double u2 = u(rng);
  const double u3 = u(rng);
  const double two_pi = 2.0 * 3.14159265358979323846;
  const double a = std::sqrt(1.0 - u1);
  const double b = std::sqrt(u1);
  const Eigen::Quaterniond q(b * std::cos(two_pi * u3), a * std::sin(two_pi * u2),
                             a * std::cos(two_pi * u2), b * std::sin(two_pi * u3));
  return q.toRotationMatrix();
}

inline Vec3 uniform_direction(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec3 v;
  do {
    const double x = n(rng);
    const double y = n(rng);
    const double z = n(rng);
    v = Vec3(x, y, z);
  } while (v.squaredNorm() < 1e-12);
  return v.normalized();
}

/// Uniform direction with magnitude uniform in [0, max_norm].
inline Vec3 bounded_vector(double max_norm, Rng& rng) {
  const Vec3 dir = uniform_direction(rng);
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) * max_norm * dir;
}

/// Yaw about world z, then tilt by `tilt` about a horizontal axis at
/// `tilt_azimuth`.  R(3,3) of the result equals cos(tilt).
inline Mat3 rotation_from_tilt(double tilt, double tilt_azimuth, double yaw) {
  const Vec3 axis(std::cos(tilt_azimuth), std::sin(tilt_azimuth), 0.0);
  return (Eigen::AngleAxisd(tilt, axis) * Eigen::AngleAxisd(yaw, Vec3::UnitZ()))
      .toRotationMatrix();
}

}  // namespace quadsim
