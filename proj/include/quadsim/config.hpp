#pragma once

#include <json.hpp>
#include <string>

#include "quadsim/env.hpp"
#include "quadsim/trainer.hpp"

namespace quadsim {

using Json = nlohmann::json;

// JSON mapping of the run configuration.  Readers start from the supplied
// defaults and only overwrite keys that are present, so partial files work.
// Unknown keys are rejected with std::invalid_argument.

Json to_json(const EpisodeConfig& cfg);
EpisodeConfig episode_from_json(const Json& j, EpisodeConfig defaults = {});

Json to_json(const RandomizationConfig& cfg);
RandomizationConfig randomization_from_json(const Json& j, RandomizationConfig defaults = {});

Json to_json(const TrainConfig& cfg);
TrainConfig train_from_json(const Json& j, TrainConfig defaults = {});

/// Parses a file; a top-level "profile": "desk" starts from desk_scale_config().
TrainConfig load_train_config(const std::string& path);

std::string to_string(RandomizationMode mode);
RandomizationMode randomization_mode_from_string(const std::string& name);

/// "crazyflie" (28 g estimate) or one of the platform presets.
QuadParams params_by_name(const std::string& name);

}  // namespace quadsim
