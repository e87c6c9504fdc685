#pragma once

#include <stdexcept>

#include "quadsim/params.hpp"
#include "quadsim/types.hpp"

namespace quadsim {

/// Rigid-body state.  R maps body to world; omega is in the body frame.
struct QuadState {
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  Mat3 rotation = Mat3::Identity();
  Vec3 omega = Vec3::Zero();
  /// Simulated time since R was last projected back onto SO(3).
  double since_reorthogonalization = 0.0;
};

/// Body-frame force and torque produced by the four rotors.
struct Wrench {
  Vec3 force = Vec3::Zero();  // always (0, 0, sum f_i)
  Vec3 torque = Vec3::Zero();
};

class IntegrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reaction-torque sign per motor: +1 counterclockwise (motors 1 and 3).
inline const Vec4& rotor_spin_signs() {
  static const Vec4 signs(1.0, -1.0, 1.0, -1.0);
  return signs;
}

/// Thrust torque sum(r_i x f_i e_z) plus the yaw reaction torque.
/// Throws std::invalid_argument on negative thrust.
Vec3 total_torque(const Vec4& thrusts, const QuadParams& params);

Wrench rotor_wrench(const Vec4& thrusts, const QuadParams& params);

/// Elementwise L1 norm of R R^T - I.
double orthogonality_error(const Mat3& rotation);

constexpr double kOrthogonalityThreshold = 0.01;
constexpr double kReorthogonalizationPeriod = 0.5;

/// Frobenius-nearest orthogonal matrix U V^T.  Throws std::domain_error when
/// the result is a reflection.
Mat3 reorthogonalize(const Mat3& rotation);

/// One explicit Euler step of the Newton-Euler equations.  R is projected
/// back onto SO(3) every kReorthogonalizationPeriod seconds or whenever the
/// orthogonality criterion fails.  Throws IntegrationError on non-finite state.
QuadState step(const QuadState& state, const Vec4& thrusts,
               const QuadParams& params, double dt);

}  // namespace quadsim
