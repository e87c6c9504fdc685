#include "quadsim/actuation.hpp"

#include <stdexcept>

namespace quadsim {

void validate(const MotorNoiseConfig& cfg) {
  if (!(cfg.theta > 0.0 && cfg.theta < 1.0)) {
    throw std::invalid_argument("motor noise theta must lie in (0, 1)");
  }
  if (!(cfg.sigma >= 0.0)) throw std::invalid_argument("motor noise sigma must be >= 0");
}

MotorCommand action_to_cmd(const Vec4& action, double thrust_limit) {
  MotorCommand cmd;
  const Vec4 a = action.cwiseMax(-1.0).cwiseMin(1.0);
  cmd.thrust = (0.5 * (a.array() + 1.0)).cwiseMax(0.0).cwiseMin(thrust_limit).matrix();
  cmd.speed = cmd.thrust.cwiseSqrt();
  return cmd;
}

MotorState filter_step(const Vec4& speed_cmd, const MotorState& motor, double dt,
                       double settling_time) {
  if (settling_time < 4.0 * dt) {
    throw std::invalid_argument("filter_step: settling time below 4 * dt");
  }
  MotorState next = motor;
  next.filtered = (4.0 * dt / settling_time) * (speed_cmd - motor.filtered) + motor.filtered;
  return next;
}

Vec4 noise_step(const MotorNoiseConfig& cfg, const Vec4& previous, Rng& rng) {
  std::normal_distribution<double> unit(0.0, 1.0);
  Vec4 next;
  for (int i = 0; i < 4; ++i) {
    next[i] = previous[i] + cfg.theta * (0.0 - previous[i]) + cfg.sigma * unit(rng);
  }
  return next;
}

Vec4 motor_forces(const MotorState& motor, const QuadParams& params) {
  const Vec4 u = (motor.filtered + motor.noise).cwiseMax(0.0).cwiseMin(1.0);
  return params.f_max * u.cwiseAbs2();
}

}  // namespace quadsim
