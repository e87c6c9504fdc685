#pragma once

#include "quadsim/dynamics.hpp"
#include "quadsim/types.hpp"

namespace quadsim {

/// Zero values everywhere give an exact observation.
struct SensorNoiseConfig {
  double position_std = 0.005;      // m
  double velocity_std = 0.01;       // m/s
  double attitude_std = 0.1 * kPi / 180.0;  // rad, angle of a random rotation
  double gyro_noise_density = 0.000175;     // rad/s/sqrt(Hz)
  double gyro_bias_walk = 0.0105;           // rad/s^2/sqrt(Hz)

  static SensorNoiseConfig off() { return {0.0, 0.0, 0.0, 0.0, 0.0}; }
};

void validate(const SensorNoiseConfig& cfg);

/// Per-episode sensor state; reset to zero bias at the start of each episode.
struct SensorState {
  Vec3 gyro_bias = Vec3::Zero();
};

/// Goal for the error terms: position and velocity in the world frame and
/// angular velocity in the body frame.
struct Goal {
  Vec3 position = Vec3(0.0, 0.0, 2.0);
  Vec3 velocity = Vec3::Zero();
  Vec3 omega = Vec3::Zero();
};

/// Packs the four blocks in the fixed [e_p, e_v, R row-major, e_omega] order.
Observation pack_observation(const Vec3& pos_err, const Vec3& vel_err,
                             const Mat3& rotation, const Vec3& omega_err);

/// Rotation about a uniformly random axis by an angle drawn from N(0, std^2).
Mat3 random_small_rotation(double angle_std, Rng& rng);

/// Noisy error observation.  Advances the gyro bias random walk by dt.
Observation observe(const QuadState& state, const Goal& goal,
                    const SensorNoiseConfig& cfg, SensorState& sensor, double dt,
                    Rng& rng);

}  // namespace quadsim
