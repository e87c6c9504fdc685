#pragma once

#include "quadsim/params.hpp"
#include "quadsim/types.hpp"

namespace quadsim {

/// Filtered normalized rotor speed and the additive Ornstein-Uhlenbeck noise.
struct MotorState {
  Vec4 filtered = Vec4::Zero();
  Vec4 noise = Vec4::Zero();
};

/// Discrete OU process, one update per dynamics step.  The mean is fixed at 0.
/// The default sigma gives a stationary rotor-speed std of about 0.019, i.e.
/// roughly 5% thrust jitter per motor around hover.
struct MotorNoiseConfig {
  double theta = 0.15;
  double sigma = 0.01;
};

void validate(const MotorNoiseConfig& cfg);

struct MotorCommand {
  Vec4 thrust;  // normalized thrust f_hat in [0, 1]
  Vec4 speed;   // normalized rotor speed u_hat = sqrt(f_hat)
};

/// f_hat = (a + 1) / 2, clamped to [0, thrust_limit]; u_hat = sqrt(f_hat).
MotorCommand action_to_cmd(const Vec4& action, double thrust_limit = 1.0);

/// First-order lag with 2% settling time T.  Throws std::invalid_argument
/// when T < 4 dt.
MotorState filter_step(const Vec4& speed_cmd, const MotorState& motor, double dt,
                       double settling_time);

Vec4 noise_step(const MotorNoiseConfig& cfg, const Vec4& previous, Rng& rng);

/// f = f_max * clamp(u_filtered + noise, 0, 1)^2.
Vec4 motor_forces(const MotorState& motor, const QuadParams& params);

}  // namespace quadsim
