#include "quadsim/sensing.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsim {

namespace {

Vec3 gaussian3(double std_dev, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  const double x = unit(rng);
  const double y = unit(rng);
  const double z = unit(rng);
  return std_dev * Vec3(x, y, z);
}

}  // namespace

void validate(const SensorNoiseConfig& cfg) {
  if (cfg.position_std < 0.0 || cfg.velocity_std < 0.0 || cfg.attitude_std < 0.0 ||
      cfg.gyro_noise_density < 0.0 || cfg.gyro_bias_walk < 0.0) {
    throw std::invalid_argument("sensor noise parameters must be non-negative");
  }
}

Observation pack_observation(const Vec3& pos_err, const Vec3& vel_err,
                             const Mat3& rotation, const Vec3& omega_err) {
  Observation obs;
  obs.segment<3>(0) = pos_err;
  obs.segment<3>(3) = vel_err;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) obs[6 + 3 * r + c] = rotation(r, c);
  }
  obs.segment<3>(15) = omega_err;
  return obs;
}

Mat3 random_small_rotation(double angle_std, Rng& rng) {
  if (angle_std == 0.0) return Mat3::Identity();
  std::normal_distribution<double> unit(0.0, 1.0);
  Vec3 axis;
  do {
    const double x = unit(rng);
    const double y = unit(rng);
    const double z = unit(rng);
    axis = Vec3(x, y, z);
  } while (axis.squaredNorm() < 1e-12);
  const double angle = angle_std * unit(rng);
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

Observation observe(const QuadState& state, const Goal& goal,
                    const SensorNoiseConfig& cfg, SensorState& sensor, double dt,
                    Rng& rng) {
  const Vec3 pos_err = state.position - goal.position + gaussian3(cfg.position_std, rng);
  const Vec3 vel_err = state.velocity - goal.velocity + gaussian3(cfg.velocity_std, rng);
  const Mat3 rotation = state.rotation * random_small_rotation(cfg.attitude_std, rng);

  // White gyro noise plus a bias driven by a random walk.
  sensor.gyro_bias += gaussian3(cfg.gyro_bias_walk * std::sqrt(dt), rng);
  const Vec3 gyro_white = gaussian3(cfg.gyro_noise_density / std::sqrt(dt), rng);
  const Vec3 omega_err = state.omega - goal.omega + gyro_white + sensor.gyro_bias;

  return pack_observation(pos_err, vel_err, rotation, omega_err);
}

}  // namespace quadsim
