#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "quadsim/actuation.hpp"
#include "quadsim/dynamics.hpp"
#include "quadsim/flight_log.hpp"
#include "quadsim/params.hpp"
#include "quadsim/sensing.hpp"
#include "quadsim/trajectory.hpp"

namespace quadsim {

/// Weights of the per-tick cost; the position term always has weight 1.
struct CostWeights {
  double velocity = 0.0;
  double omega = 0.1;
  double action = 0.05;
  double rotation = 0.0;
};

void validate(const CostWeights& w);

/// (|e_p| + a_v |e_v| + a_w |e_w| + a_a |a| + a_R angle(R)) * dt, where the
/// errors are taken against the goal and angle(R) is the rotation angle of R.
double step_cost(const QuadState& state, const Action& action, const Goal& goal,
                 const CostWeights& weights, double dt);

enum class Scenario { kHover, kFigureEight };

struct EpisodeConfig {
  double duration = 7.0;
  int policy_rate = 100;
  int dynamics_rate = 200;

  /// Initial position: cube of this side centered on the goal, clipped to
  /// z >= min_altitude.
  double init_box_side = 2.0;
  double min_altitude = 0.1;
  double init_max_speed = 1.0;
  double init_max_angular_speed = 2.0 * kPi;

  Scenario scenario = Scenario::kHover;
  Vec3 hover_goal = Vec3(0.0, 0.0, 2.0);
  FigureEight figure_eight = default_figure_eight();

  CostWeights weights;
  bool noise = true;
  MotorNoiseConfig motor_noise;
  SensorNoiseConfig sensor_noise;

  /// Normalized thrust ceiling applied to every command.
  double thrust_command_limit = 1.0;
  /// Episodes whose position error exceeds this radius stop early and are
  /// charged the position cost of the remaining ticks.  <= 0 disables.
  double abort_radius = 10.0;

  int substeps() const { return dynamics_rate / policy_rate; }
  double policy_dt() const { return 1.0 / policy_rate; }
  double dynamics_dt() const { return 1.0 / dynamics_rate; }
  int ticks() const;
};

void validate(const EpisodeConfig& cfg);

/// Draws an initial state around `goal` per the config bounds.
QuadState sample_initial_state(const EpisodeConfig& cfg, const Vec3& goal, Rng& rng);

struct StepResult {
  Observation observation;
  double cost = 0.0;
  bool done = false;
  bool aborted = false;
};

/// One simulated quadrotor.  Policy ticks at policy_rate; each tick holds the
/// motor command for substeps() dynamics steps.  Not thread-safe; give each
/// worker its own instance.
class QuadEnv {
 public:
  QuadEnv(EpisodeConfig cfg, std::uint64_t seed);

  /// Starts an episode from a sampled initial state.
  Observation reset(const QuadParams& params);
  /// Starts an episode from the given state (time and motors reset).
  Observation reset(const QuadParams& params, const QuadState& initial);

  /// Throws std::logic_error when the episode is finished or not started.
  StepResult step(const Action& action);

  void reseed(std::uint64_t seed) { rng_.seed(seed); }
  void set_logging(bool enabled) { logging_ = enabled; }

  const EpisodeConfig& config() const { return cfg_; }
  const QuadParams& params() const { return params_; }
  const QuadState& state() const { return state_; }
  const MotorState& motors() const { return motors_; }
  Goal goal_at(double t) const;
  Goal current_goal() const { return goal_at(time()); }
  double time() const { return static_cast<double>(tick_) / cfg_.policy_rate; }
  int tick() const { return tick_; }
  bool done() const { return done_; }
  const Observation& last_observation() const { return obs_; }
  const FlightLog& log() const { return log_; }
  Rng& rng() { return rng_; }

 private:
  Observation observe_now();

  EpisodeConfig cfg_;
  Rng rng_;
  QuadParams params_;
  QuadState state_;
  MotorState motors_;
  SensorState sensor_;
  Observation obs_ = Observation::Zero();
  int tick_ = 0;
  bool started_ = false;
  bool done_ = false;
  bool logging_ = false;
  FlightLog log_;
};

}  // namespace quadsim
