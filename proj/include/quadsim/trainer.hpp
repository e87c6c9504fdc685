#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "quadsim/env.hpp"
#include "quadsim/params.hpp"
#include "quadsim/policy.hpp"
#include "quadsim/ppo.hpp"

namespace quadsim {

enum class RandomizationMode { kNone, kNominal, kTotal, kThrustToWeight };

struct RandomizationConfig {
  RandomizationMode mode = RandomizationMode::kNone;
  QuadParams base = nominal_crazyflie();
  double spread = 0.2;  // nominal mode
  RandomizationLimits limits;  // total mode
  Range<double> thrust_to_weight{1.5, 2.5};  // thrust-to-weight-only mode
};

/// Draws the dynamics parameters of one training trajectory.
QuadParams sample_params(const RandomizationConfig& cfg, double dynamics_dt, Rng& rng);

struct TrainConfig {
  int iterations = 3000;
  int trajectories = 40;
  EpisodeConfig episode;
  RandomizationConfig randomization;
  double gamma = 0.99;
  double lambda = 0.95;
  PpoConfig ppo;
  double initial_log_std = -1.0;
  std::uint64_t seed = 1;
};

void validate(const TrainConfig& cfg);

/// Reduced profile: 300 iterations, 3 s episodes, minibatch 512.
TrainConfig desk_scale_config();

/// Samples for one PPO iteration.  Trajectory k occupies columns
/// [episode_start[k], episode_start[k] + episode_length[k]).
struct RolloutBatch {
  MatrixXd observations;  // 18 x N
  MatrixXd actions;       // 4 x N
  VectorXd log_probs;
  VectorXd costs;         // per-tick cost; reward = -cost
  VectorXd values;        // V(o_t) under the value net used while collecting
  std::vector<int> episode_start;
  std::vector<int> episode_length;
  std::vector<bool> aborted;
  /// V of the observation after the last tick; 0 for aborted episodes.
  std::vector<double> bootstrap_value;
  /// Sum over ticks of |e_p| dt, per trajectory.
  std::vector<double> position_cost;
  std::vector<QuadParams> params;

  Eigen::Index size() const { return log_probs.size(); }
};

/// Seed for one stream of one trajectory in one iteration.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t iteration,
                          std::uint64_t trajectory, std::uint64_t stream);

/// Rolls out cfg.trajectories stochastic episodes.  Integration errors are
/// rethrown naming the trajectory.
RolloutBatch collect_rollouts(const PolicyNet& policy, const Mlp& value,
                              const TrainConfig& cfg, std::uint64_t iteration);

/// Reward is the negated cost; the sign convention lives here only.
inline double reward_from_cost(double cost) { return -cost; }

/// GAE per trajectory plus batch advantage normalization.
PpoSamples make_samples(const RolloutBatch& batch, double gamma, double lambda);

struct IterationStats {
  int iteration = 0;
  double mean_position_cost = 0.0;
  double mean_episode_cost = 0.0;
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double clip_fraction = 0.0;
  double mean_std = 0.0;
  int aborted = 0;
};

struct TrainResult {
  PolicyNet policy;
  Mlp value;
  PolicyNet best;  // lowest mean_position_cost seen
  int best_iteration = -1;
  std::vector<IterationStats> curve;
};

using IterationCallback =
    std::function<void(const IterationStats&, const PolicyNet& policy)>;

/// Collect/update loop.  Aborts with std::runtime_error after three
/// consecutive non-finite updates.
TrainResult train(const TrainConfig& cfg, const IterationCallback& on_iteration = {});

/// Mean of the last `window` iterations' position cost.
double final_position_cost(const std::vector<IterationStats>& curve, int window = 10);

/// Indices of the `keep` runs with the lowest final_position_cost.
std::vector<int> rank_seeds(const std::vector<std::vector<IterationStats>>& curves,
                            int keep = 2);

void write_learning_curve(const std::string& path, const std::vector<IterationStats>& curve);

}  // namespace quadsim
