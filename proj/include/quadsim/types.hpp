#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <random>

namespace quadsim {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat3 = Eigen::Matrix3d;

/// The policy input: [e_p, e_v, R (row-major), e_omega].
constexpr int kObsDim = 18;
constexpr int kActDim = 4;
using Observation = Eigen::Matrix<double, kObsDim, 1>;
using Action = Vec4;

constexpr double kGravity = 9.81;

/// Every stochastic component takes one of these by reference; callers own
/// the stream so parallel workers never share state.
using Rng = std::mt19937_64;

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

}  // namespace quadsim
