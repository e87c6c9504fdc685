#include "quadsim/dynamics.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace quadsim {

Vec3 total_torque(const Vec4& thrusts, const QuadParams& params) {
  if ((thrusts.array() < 0.0).any()) {
    throw std::invalid_argument("total_torque: negative rotor thrust");
  }
  Vec3 torque = Vec3::Zero();
  for (int i = 0; i < 4; ++i) {
    torque += params.geometry.motor_positions[i].cross(Vec3(0.0, 0.0, thrusts[i]));
  }
  torque.z() += params.torque_to_thrust * rotor_spin_signs().dot(thrusts);
  return torque;
}

Wrench rotor_wrench(const Vec4& thrusts, const QuadParams& params) {
  Wrench w;
  w.force = Vec3(0.0, 0.0, thrusts.sum());
  w.torque = total_torque(thrusts, params);
  return w;
}

double orthogonality_error(const Mat3& rotation) {
  return (rotation * rotation.transpose() - Mat3::Identity()).cwiseAbs().sum();
}

Mat3 reorthogonalize(const Mat3& rotation) {
  Eigen::JacobiSVD<Mat3> svd(rotation, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 out = svd.matrixU() * svd.matrixV().transpose();
  if (out.determinant() < 0.0) {
    throw std::domain_error("reorthogonalize: input is reflection-dominant");
  }
  return out;
}

QuadState step(const QuadState& s, const Vec4& thrusts, const QuadParams& params,
               double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  const Wrench w = rotor_wrench(thrusts, params);

  const Vec3 accel = Vec3(0.0, 0.0, -kGravity) + (s.rotation * w.force) / params.mass;
  const Vec3 omega_dot =
      params.inertia.llt().solve(w.torque - s.omega.cross(params.inertia * s.omega));
  // dR/dt = [R omega]_x R, omega expressed in the world frame.
  const Mat3 rotation_dot = skew(s.rotation * s.omega) * s.rotation;

  QuadState next;
  next.velocity = s.velocity + dt * accel;
  next.omega = s.omega + dt * omega_dot;
  next.position = s.position + dt * s.velocity;
  next.rotation = s.rotation + dt * rotation_dot;
  next.since_reorthogonalization = s.since_reorthogonalization + dt;

  if (!next.position.allFinite() || !next.velocity.allFinite() ||
      !next.rotation.allFinite() || !next.omega.allFinite()) {
    throw IntegrationError("step: non-finite state");
  }

  // Period compared with a half-step slack so 100 steps of 0.005 s hit 0.5 s.
  if (next.since_reorthogonalization >= kReorthogonalizationPeriod - 0.5 * dt ||
      orthogonality_error(next.rotation) >= kOrthogonalityThreshold) {
    next.rotation = reorthogonalize(next.rotation);
    next.since_reorthogonalization = 0.0;
  }
  return next;
}

}  // namespace quadsim
