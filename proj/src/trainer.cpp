#include "quadsim/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "quadsim/gae.hpp"

namespace quadsim {

QuadParams sample_params(const RandomizationConfig& cfg, double dynamics_dt, Rng& rng) {
  switch (cfg.mode) {
    case RandomizationMode::kNone:
      return cfg.base;
    case RandomizationMode::kNominal:
      return sample_nominal(cfg.base, cfg.spread, rng, dynamics_dt);
    case RandomizationMode::kTotal:
      return sample_total(cfg.limits, rng, dynamics_dt);
    case RandomizationMode::kThrustToWeight:
      return sample_thrust_to_weight(cfg.base, cfg.thrust_to_weight, rng);
  }
  throw std::logic_error("unknown randomization mode");
}

void validate(const TrainConfig& cfg) {
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be >= 0");
  if (cfg.trajectories < 1) throw std::invalid_argument("trajectories must be >= 1");
  if (!(cfg.gamma > 0.0 && cfg.gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
  if (!(cfg.lambda > 0.0 && cfg.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1]");
  }
  validate(cfg.episode);
  validate(cfg.ppo);
}

TrainConfig desk_scale_config() {
  TrainConfig cfg;
  cfg.iterations = 300;
  cfg.episode.duration = 3.0;
  // 12k samples per iteration: smaller minibatches give enough updates.
  cfg.ppo.minibatch = 512;
  return cfg;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t iteration,
                          std::uint64_t trajectory, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(iteration),
                    static_cast<std::uint32_t>(iteration >> 32),
                    static_cast<std::uint32_t>(trajectory), static_cast<std::uint32_t>(stream)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

namespace {

enum Stream : std::uint64_t { kEnvStream = 0, kActionStream = 1, kParamStream = 2 };

struct Trajectory {
  std::vector<Observation> observations;
  std::vector<Action> actions;
  std::vector<double> log_probs;
  std::vector<double> costs;
  double position_cost = 0.0;
  bool aborted = false;
  Observation last_observation;
};

}  // namespace

RolloutBatch collect_rollouts(const PolicyNet& policy, const Mlp& value,
                              const TrainConfig& cfg, std::uint64_t iteration) {
  const int k_traj = cfg.trajectories;
  const int ticks = cfg.episode.ticks();
  const double policy_dt = cfg.episode.policy_dt();

  std::vector<QuadEnv> envs;
  std::vector<Rng> action_rngs;
  std::vector<Trajectory> traj(k_traj);
  RolloutBatch batch;
  envs.reserve(k_traj);
  for (int k = 0; k < k_traj; ++k) {
    envs.emplace_back(cfg.episode, derive_seed(cfg.seed, iteration, k, kEnvStream));
    action_rngs.emplace_back(derive_seed(cfg.seed, iteration, k, kActionStream));
    Rng param_rng(derive_seed(cfg.seed, iteration, k, kParamStream));
    batch.params.push_back(
        sample_params(cfg.randomization, cfg.episode.dynamics_dt(), param_rng));
    traj[k].last_observation = envs[k].reset(batch.params[k]);
    traj[k].observations.reserve(ticks);
  }

  std::vector<int> active(k_traj);
  std::iota(active.begin(), active.end(), 0);
  MatrixXd obs_block(kObsDim, k_traj);
  while (!active.empty()) {
    obs_block.resize(kObsDim, static_cast<Eigen::Index>(active.size()));
    for (std::size_t j = 0; j < active.size(); ++j) {
      obs_block.col(j) = traj[active[j]].last_observation;
    }
    const MatrixXd means = policy.mean.forward_batch(obs_block);

    std::vector<int> still_active;
    for (std::size_t j = 0; j < active.size(); ++j) {
      const int k = active[j];
      Trajectory& tr = traj[k];
      const SampledAction s = sample_around(means.col(j), policy.log_std, action_rngs[k]);
      const Action a = s.action;
      StepResult r;
      try {
        r = envs[k].step(a);
      } catch (const IntegrationError& e) {
        throw IntegrationError("trajectory " + std::to_string(k) + ": " + e.what());
      }
      tr.observations.push_back(tr.last_observation);
      tr.actions.push_back(a);
      tr.log_probs.push_back(s.log_prob);
      tr.costs.push_back(r.cost);
      const double distance =
          (envs[k].state().position - envs[k].current_goal().position).norm();
      tr.position_cost += distance * policy_dt;
      tr.last_observation = r.observation;
      if (r.aborted) {
        tr.aborted = true;
        tr.position_cost += (ticks - envs[k].tick()) * distance * policy_dt;
      }
      if (!r.done) still_active.push_back(k);
    }
    active.swap(still_active);
  }

  int total = 0;
  for (const auto& tr : traj) total += static_cast<int>(tr.costs.size());
  batch.observations.resize(kObsDim, total);
  batch.actions.resize(kActDim, total);
  batch.log_probs.resize(total);
  batch.costs.resize(total);
  MatrixXd last_obs(kObsDim, k_traj);
  int col = 0;
  for (int k = 0; k < k_traj; ++k) {
    const Trajectory& tr = traj[k];
    batch.episode_start.push_back(col);
    batch.episode_length.push_back(static_cast<int>(tr.costs.size()));
    batch.aborted.push_back(tr.aborted);
    batch.position_cost.push_back(tr.position_cost);
    for (std::size_t t = 0; t < tr.costs.size(); ++t, ++col) {
      batch.observations.col(col) = tr.observations[t];
      batch.actions.col(col) = tr.actions[t];
      batch.log_probs[col] = tr.log_probs[t];
      batch.costs[col] = tr.costs[t];
    }
    last_obs.col(k) = tr.last_observation;
  }
  batch.values = value.forward_batch(batch.observations).row(0).transpose();
  const MatrixXd boot = value.forward_batch(last_obs);
  for (int k = 0; k < k_traj; ++k) {
    batch.bootstrap_value.push_back(traj[k].aborted ? 0.0 : boot(0, k));
  }
  return batch;
}

PpoSamples make_samples(const RolloutBatch& batch, double gamma, double lambda) {
  PpoSamples s;
  s.observations = batch.observations;
  s.actions = batch.actions;
  s.log_probs = batch.log_probs;
  s.advantages.resize(batch.size());
  s.returns.resize(batch.size());
  for (std::size_t k = 0; k < batch.episode_start.size(); ++k) {
    const int start = batch.episode_start[k];
    const int len = batch.episode_length[k];
    VectorXd rewards(len);
    VectorXd values(len + 1);
    for (int t = 0; t < len; ++t) {
      rewards[t] = reward_from_cost(batch.costs[start + t]);
      values[t] = batch.values[start + t];
    }
    values[len] = batch.bootstrap_value[k];
    const AdvantageEstimate est = compute_gae(rewards, values, gamma, lambda);
    s.advantages.segment(start, len) = est.advantages;
    s.returns.segment(start, len) = est.returns;
  }
  normalize_advantages(s.advantages);
  return s;
}

TrainResult train(const TrainConfig& cfg, const IterationCallback& on_iteration) {
  validate(cfg);
  const std::uint64_t setup = ~std::uint64_t{0};
  Rng init_rng(derive_seed(cfg.seed, setup, 0, 3));
  Rng update_rng(derive_seed(cfg.seed, setup, 0, 4));

  TrainResult result{PolicyNet::initialized(init_rng, cfg.initial_log_std),
                     Mlp({kObsDim, 64, 64, 1}), PolicyNet{}, -1, {}};
  result.value.initialize(init_rng, 1.0);
  result.best = result.policy;
  PpoOptimizers opt = make_optimizers(result.policy, result.value, cfg.ppo);

  double best_cost = std::numeric_limits<double>::infinity();
  int consecutive_failures = 0;
  for (int it = 0; it < cfg.iterations; ++it) {
    const RolloutBatch batch = collect_rollouts(result.policy, result.value, cfg, it);
    const PpoSamples samples = make_samples(batch, cfg.gamma, cfg.lambda);

    IterationStats st;
    st.iteration = it + 1;
    const double n_traj = static_cast<double>(batch.position_cost.size());
    st.mean_position_cost =
        std::accumulate(batch.position_cost.begin(), batch.position_cost.end(), 0.0) / n_traj;
    st.mean_episode_cost = batch.costs.sum() / n_traj;
    st.aborted = static_cast<int>(std::count(batch.aborted.begin(), batch.aborted.end(), true));
    st.mean_std = result.policy.log_std.array().exp().mean();

    // Statistics describe the policy that collected the batch.
    if (st.mean_position_cost < best_cost) {
      best_cost = st.mean_position_cost;
      result.best = result.policy;
      result.best_iteration = st.iteration;
    }

    const PolicyNet policy_before = result.policy;
    const Mlp value_before = result.value;
    try {
      const PpoStats ps = ppo_update(result.policy, result.value, samples, cfg.ppo, opt, update_rng);
      st.policy_loss = ps.policy_loss;
      st.value_loss = ps.value_loss;
      st.clip_fraction = ps.clip_fraction;
      consecutive_failures = 0;
    } catch (const std::runtime_error&) {
      result.policy = policy_before;
      result.value = value_before;
      if (++consecutive_failures >= 3) {
        throw std::runtime_error("train: repeated non-finite losses at iteration " +
                                 std::to_string(st.iteration));
      }
      st.policy_loss = st.value_loss = std::numeric_limits<double>::quiet_NaN();
    }
    result.curve.push_back(st);
    if (on_iteration) on_iteration(st, result.policy);
  }
  return result;
}

double final_position_cost(const std::vector<IterationStats>& curve, int window) {
  if (curve.empty()) return std::numeric_limits<double>::infinity();
  const int n = std::min<int>(window, static_cast<int>(curve.size()));
  double sum = 0.0;
  for (int i = static_cast<int>(curve.size()) - n; i < static_cast<int>(curve.size()); ++i) {
    sum += curve[i].mean_position_cost;
  }
  return sum / n;
}

std::vector<int> rank_seeds(const std::vector<std::vector<IterationStats>>& curves, int keep) {
  std::vector<int> order(curves.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return final_position_cost(curves[a]) < final_position_cost(curves[b]);
  });
  order.resize(std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(keep, 0))));
  return order;
}

void write_learning_curve(const std::string& path, const std::vector<IterationStats>& curve) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iteration,mean_position_cost,mean_episode_cost,policy_loss,value_loss,"
         "clip_fraction,mean_std,aborted\n";
  out << std::setprecision(17);
  for (const auto& s : curve) {
    out << s.iteration << ',' << s.mean_position_cost << ',' << s.mean_episode_cost << ','
        << s.policy_loss << ',' << s.value_loss << ',' << s.clip_fraction << ','
        << s.mean_std << ',' << s.aborted << '\n';
  }
}

}  // namespace quadsim
