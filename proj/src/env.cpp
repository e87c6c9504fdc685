#include "quadsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "quadsim/random.hpp"

namespace quadsim {

void validate(const CostWeights& w) {
  if (w.velocity < 0.0 || w.omega < 0.0 || w.action < 0.0 || w.rotation < 0.0) {
    throw std::invalid_argument("cost weights must be non-negative");
  }
}

double step_cost(const QuadState& state, const Action& action, const Goal& goal,
                 const CostWeights& weights, double dt) {
  const double cos_angle =
      std::clamp((state.rotation.trace() - 1.0) / 2.0, -1.0, 1.0);
  const double c = (state.position - goal.position).norm() +
                   weights.velocity * (state.velocity - goal.velocity).norm() +
                   weights.omega * (state.omega - goal.omega).norm() +
                   weights.action * action.norm() +
                   weights.rotation * std::acos(cos_angle);
  return c * dt;
}

int EpisodeConfig::ticks() const {
  return static_cast<int>(std::llround(duration * policy_rate));
}

void validate(const EpisodeConfig& cfg) {
  if (!(cfg.duration > 0.0)) throw std::invalid_argument("duration must be positive");
  if (cfg.policy_rate <= 0 || cfg.dynamics_rate <= 0 ||
      cfg.dynamics_rate % cfg.policy_rate != 0) {
    throw std::invalid_argument("dynamics_rate must be a positive multiple of policy_rate");
  }
  if (cfg.init_box_side < 0.0 || cfg.init_max_speed < 0.0 ||
      cfg.init_max_angular_speed < 0.0) {
    throw std::invalid_argument("initial-state bounds must be non-negative");
  }
  if (!(cfg.thrust_command_limit > 0.0 && cfg.thrust_command_limit <= 1.0)) {
    throw std::invalid_argument("thrust_command_limit must lie in (0, 1]");
  }
  validate(cfg.weights);
  validate(cfg.motor_noise);
  validate(cfg.sensor_noise);
}

QuadState sample_initial_state(const EpisodeConfig& cfg, const Vec3& goal, Rng& rng) {
  std::uniform_real_distribution<double> unit(-0.5, 0.5);
  QuadState s;
  s.rotation = uniform_rotation(rng);
  const double dx = unit(rng);
  const double dy = unit(rng);
  const double dz = unit(rng);
  s.position = goal + cfg.init_box_side * Vec3(dx, dy, dz);
  s.position.z() = std::max(s.position.z(), cfg.min_altitude);
  s.velocity = bounded_vector(cfg.init_max_speed, rng);
  s.omega = bounded_vector(cfg.init_max_angular_speed, rng);
  return s;
}

QuadEnv::QuadEnv(EpisodeConfig cfg, std::uint64_t seed) : cfg_(std::move(cfg)), rng_(seed) {
  validate(cfg_);
}

Goal QuadEnv::goal_at(double t) const {
  if (cfg_.scenario == Scenario::kFigureEight) {
    Goal g = cfg_.figure_eight.at(t);
    g.position += Vec3(cfg_.hover_goal.x(), cfg_.hover_goal.y(),
                       cfg_.hover_goal.z() - cfg_.figure_eight.altitude);
    return g;
  }
  Goal g;
  g.position = cfg_.hover_goal;
  return g;
}

Observation QuadEnv::reset(const QuadParams& params) {
  const QuadState initial = sample_initial_state(cfg_, goal_at(0.0).position, rng_);
  return reset(params, initial);
}

Observation QuadEnv::reset(const QuadParams& params, const QuadState& initial) {
  params_ = params;
  state_ = initial;
  // Rotors start at hover speed.
  motors_ = MotorState{};
  motors_.filtered.setConstant(std::sqrt(1.0 / params_.thrust_to_weight));
  sensor_ = SensorState{};
  tick_ = 0;
  started_ = true;
  done_ = false;
  log_.clear();
  if (logging_) log_.reserve(cfg_.ticks());
  obs_ = observe_now();
  return obs_;
}

Observation QuadEnv::observe_now() {
  const SensorNoiseConfig sensor_cfg = cfg_.noise ? cfg_.sensor_noise : SensorNoiseConfig::off();
  return observe(state_, current_goal(), sensor_cfg, sensor_, cfg_.policy_dt(), rng_);
}

StepResult QuadEnv::step(const Action& action) {
  if (!started_) throw std::logic_error("QuadEnv::step before reset");
  if (done_) throw std::logic_error("QuadEnv::step on a finished episode");

  const MotorCommand cmd = action_to_cmd(action, cfg_.thrust_command_limit);
  const double dt = cfg_.dynamics_dt();
  for (int i = 0; i < cfg_.substeps(); ++i) {
    motors_ = filter_step(cmd.speed, motors_, dt, params_.settling_time);
    if (cfg_.noise) motors_.noise = noise_step(cfg_.motor_noise, motors_.noise, rng_);
    state_ = quadsim::step(state_, motor_forces(motors_, params_), params_, dt);
  }
  ++tick_;

  const Goal goal = current_goal();
  StepResult result;
  result.cost = step_cost(state_, action, goal, cfg_.weights, cfg_.policy_dt());
  const int remaining = cfg_.ticks() - tick_;
  const double distance = (state_.position - goal.position).norm();
  if (cfg_.abort_radius > 0.0 && distance > cfg_.abort_radius && remaining > 0) {
    result.aborted = true;
    result.cost += remaining * distance * cfg_.policy_dt();
  }
  result.done = result.aborted || remaining <= 0;
  done_ = result.done;

  obs_ = observe_now();
  result.observation = obs_;

  if (logging_) {
    FlightRecord rec;
    rec.time = time();
    rec.state = state_;
    rec.observation = obs_;
    rec.action = action;
    rec.goal = goal;
    rec.cost = result.cost;
    log_.push_back(rec);
  }
  return result;
}

}  // namespace quadsim
