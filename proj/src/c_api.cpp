#include "quadsim/c_api.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>

#include "quadsim/config.hpp"
#include "quadsim/env.hpp"
#include "quadsim/trainer.hpp"

using quadsim::Json;

struct quadsim_env {
  quadsim::EpisodeConfig episode;
  quadsim::RandomizationConfig randomization;
  std::unique_ptr<quadsim::QuadEnv> env;
  quadsim::Rng param_rng;
  std::string error;
  std::string config_text;
};

namespace {

void copy_error(const char* msg, char* err, size_t len) {
  if (err == nullptr || len == 0) return;
  std::strncpy(err, msg, len - 1);
  err[len - 1] = '\0';
}

void write_obs(const quadsim::Observation& o, double* out) {
  for (int i = 0; i < quadsim::kObsDim; ++i) out[i] = o[i];
}

}  // namespace

extern "C" {

quadsim_env* quadsim_env_create(const char* config_json, char* err, size_t err_len) {
  try {
    auto h = std::make_unique<quadsim_env>();
    const Json j = (config_json && *config_json) ? Json::parse(config_json) : Json::object();
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& item : j.items()) {
      if (item.key() != "episode" && item.key() != "randomization") {
        throw std::invalid_argument("unknown config key '" + item.key() + "'");
      }
    }
    if (j.contains("episode")) h->episode = quadsim::episode_from_json(j.at("episode"));
    if (j.contains("randomization")) {
      h->randomization = quadsim::randomization_from_json(j.at("randomization"));
    }
    h->env = std::make_unique<quadsim::QuadEnv>(h->episode, 0);
    return h.release();
  } catch (const std::exception& e) {
    copy_error(e.what(), err, err_len);
    return nullptr;
  }
}

void quadsim_env_destroy(quadsim_env* env) { delete env; }

const char* quadsim_env_config(quadsim_env* env) {
  Json j;
  j["episode"] = quadsim::to_json(env->episode);
  j["randomization"] = quadsim::to_json(env->randomization);
  env->config_text = j.dump();
  return env->config_text.c_str();
}

int quadsim_env_reset(quadsim_env* env, int has_seed, uint64_t seed, double obs[18]) {
  try {
    if (has_seed) {
      env->env->reseed(quadsim::derive_seed(seed, 0, 0, 0));
      env->param_rng.seed(quadsim::derive_seed(seed, 0, 0, 2));
    }
    const quadsim::QuadParams params = quadsim::sample_params(
        env->randomization, env->episode.dynamics_dt(), env->param_rng);
    write_obs(env->env->reset(params), obs);
    return 0;
  } catch (const std::exception& e) {
    env->error = e.what();
    return -1;
  }
}

int quadsim_env_step(quadsim_env* env, const double action[4], double obs[18],
                     double* reward, int* terminated, int* truncated, double state[18]) {
  try {
    const quadsim::StepResult r =
        env->env->step(quadsim::Action(action[0], action[1], action[2], action[3]));
    write_obs(r.observation, obs);
    *reward = quadsim::reward_from_cost(r.cost);
    *terminated = r.aborted ? 1 : 0;
    *truncated = (r.done && !r.aborted) ? 1 : 0;
    if (state != nullptr) {
      const quadsim::QuadState& s = env->env->state();
      write_obs(quadsim::pack_observation(s.position, s.velocity, s.rotation, s.omega), state);
    }
    return 0;
  } catch (const std::exception& e) {
    env->error = e.what();
    return -1;
  }
}

int quadsim_env_max_steps(const quadsim_env* env) { return env->episode.ticks(); }

const char* quadsim_env_last_error(const quadsim_env* env) { return env->error.c_str(); }

}  // extern "C"
