#include "quadsim/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace quadsim {

namespace {

void check_keys(const Json& j, const std::set<std::string>& allowed, const char* where) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + ": expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

template <class T>
void read(const Json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_vec3(const Json& j, const char* key, Vec3& out) {
  if (!j.contains(key)) return;
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != 3) throw std::invalid_argument(std::string(key) + ": expected 3 numbers");
  out = Vec3(v[0], v[1], v[2]);
}

void read_range(const Json& j, const char* key, Range<double>& out) {
  if (!j.contains(key)) return;
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != 2) throw std::invalid_argument(std::string(key) + ": expected [lo, hi]");
  out = {v[0], v[1]};
}

Json range_json(Range<double> r) { return Json::array({r.lo, r.hi}); }

}  // namespace

std::string to_string(RandomizationMode mode) {
  switch (mode) {
    case RandomizationMode::kNone: return "none";
    case RandomizationMode::kNominal: return "nominal";
    case RandomizationMode::kTotal: return "total";
    case RandomizationMode::kThrustToWeight: return "t2w";
  }
  return "none";
}

RandomizationMode randomization_mode_from_string(const std::string& name) {
  if (name == "none") return RandomizationMode::kNone;
  if (name == "nominal") return RandomizationMode::kNominal;
  if (name == "total") return RandomizationMode::kTotal;
  if (name == "t2w") return RandomizationMode::kThrustToWeight;
  throw std::invalid_argument("unknown randomization mode: " + name);
}

QuadParams params_by_name(const std::string& name) {
  if (name == "crazyflie") return nominal_crazyflie();
  return platform_preset(name).params;
}

Json to_json(const EpisodeConfig& c) {
  Json j;
  j["duration"] = c.duration;
  j["policy_rate"] = c.policy_rate;
  j["dynamics_rate"] = c.dynamics_rate;
  j["init_box_side"] = c.init_box_side;
  j["min_altitude"] = c.min_altitude;
  j["init_max_speed"] = c.init_max_speed;
  j["init_max_angular_speed"] = c.init_max_angular_speed;
  j["scenario"] = c.scenario == Scenario::kHover ? "hover" : "figure_eight";
  j["hover_goal"] = {c.hover_goal.x(), c.hover_goal.y(), c.hover_goal.z()};
  j["figure_eight"] = {{"period", c.figure_eight.period},
                       {"amplitude_x", c.figure_eight.amplitude_x},
                       {"amplitude_y", c.figure_eight.amplitude_y},
                       {"altitude", c.figure_eight.altitude}};
  j["weights"] = {{"velocity", c.weights.velocity},
                  {"omega", c.weights.omega},
                  {"action", c.weights.action},
                  {"rotation", c.weights.rotation}};
  j["noise"] = c.noise;
  j["motor_noise"] = {{"theta", c.motor_noise.theta}, {"sigma", c.motor_noise.sigma}};
  j["sensor_noise"] = {{"position_std", c.sensor_noise.position_std},
                       {"velocity_std", c.sensor_noise.velocity_std},
                       {"attitude_std", c.sensor_noise.attitude_std},
                       {"gyro_noise_density", c.sensor_noise.gyro_noise_density},
                       {"gyro_bias_walk", c.sensor_noise.gyro_bias_walk}};
  j["thrust_command_limit"] = c.thrust_command_limit;
  j["abort_radius"] = c.abort_radius;
  return j;
}

EpisodeConfig episode_from_json(const Json& j, EpisodeConfig c) {
  check_keys(j,
             {"duration", "policy_rate", "dynamics_rate", "init_box_side", "min_altitude",
              "init_max_speed", "init_max_angular_speed", "scenario", "hover_goal",
              "figure_eight", "weights", "noise", "motor_noise", "sensor_noise",
              "thrust_command_limit", "abort_radius"},
             "episode");
  read(j, "duration", c.duration);
  read(j, "policy_rate", c.policy_rate);
  read(j, "dynamics_rate", c.dynamics_rate);
  read(j, "init_box_side", c.init_box_side);
  read(j, "min_altitude", c.min_altitude);
  read(j, "init_max_speed", c.init_max_speed);
  read(j, "init_max_angular_speed", c.init_max_angular_speed);
  if (j.contains("scenario")) {
    const auto s = j.at("scenario").get<std::string>();
    if (s == "hover") {
      c.scenario = Scenario::kHover;
    } else if (s == "figure_eight") {
      c.scenario = Scenario::kFigureEight;
    } else {
      throw std::invalid_argument("unknown scenario: " + s);
    }
  }
  read_vec3(j, "hover_goal", c.hover_goal);
  if (j.contains("figure_eight")) {
    const Json& f = j.at("figure_eight");
    check_keys(f, {"period", "amplitude_x", "amplitude_y", "altitude"}, "figure_eight");
    read(f, "period", c.figure_eight.period);
    read(f, "amplitude_x", c.figure_eight.amplitude_x);
    read(f, "amplitude_y", c.figure_eight.amplitude_y);
    read(f, "altitude", c.figure_eight.altitude);
  }
  if (j.contains("weights")) {
    const Json& w = j.at("weights");
    check_keys(w, {"velocity", "omega", "action", "rotation"}, "weights");
    read(w, "velocity", c.weights.velocity);
    read(w, "omega", c.weights.omega);
    read(w, "action", c.weights.action);
    read(w, "rotation", c.weights.rotation);
  }
  read(j, "noise", c.noise);
  if (j.contains("motor_noise")) {
    const Json& m = j.at("motor_noise");
    check_keys(m, {"theta", "sigma"}, "motor_noise");
    read(m, "theta", c.motor_noise.theta);
    read(m, "sigma", c.motor_noise.sigma);
  }
  if (j.contains("sensor_noise")) {
    const Json& s = j.at("sensor_noise");
    check_keys(s,
               {"position_std", "velocity_std", "attitude_std", "gyro_noise_density",
                "gyro_bias_walk"},
               "sensor_noise");
    read(s, "position_std", c.sensor_noise.position_std);
    read(s, "velocity_std", c.sensor_noise.velocity_std);
    read(s, "attitude_std", c.sensor_noise.attitude_std);
    read(s, "gyro_noise_density", c.sensor_noise.gyro_noise_density);
    read(s, "gyro_bias_walk", c.sensor_noise.gyro_bias_walk);
  }
  read(j, "thrust_command_limit", c.thrust_command_limit);
  read(j, "abort_radius", c.abort_radius);
  validate(c);
  return c;
}

Json to_json(const RandomizationConfig& c) {
  Json j;
  j["mode"] = to_string(c.mode);
  j["spread"] = c.spread;
  j["thrust_to_weight"] = range_json(c.thrust_to_weight);
  const RandomizationLimits& l = c.limits;
  j["limits"] = {{"body_width", range_json(l.body_width)},
                 {"payload_width_ratio", range_json(l.payload_width_ratio)},
                 {"arm_length_ratio", range_json(l.arm_length_ratio)},
                 {"arm_radius_ratio", range_json(l.arm_radius_ratio)},
                 {"motor_radius_ratio", range_json(l.motor_radius_ratio)},
                 {"rotor_radius_ratio", range_json(l.rotor_radius_ratio)},
                 {"density", range_json(l.density)},
                 {"settling_time", range_json(l.settling_time)},
                 {"thrust_to_weight", range_json(l.thrust_to_weight)},
                 {"torque_to_thrust", range_json(l.torque_to_thrust)},
                 {"max_mass", l.max_mass},
                 {"height_ratios",
                  {{"body", l.heights.body},
                   {"payload", l.heights.payload},
                   {"motor", l.heights.motor},
                   {"rotor", l.heights.rotor}}}};
  return j;
}

RandomizationConfig randomization_from_json(const Json& j, RandomizationConfig c) {
  check_keys(j, {"mode", "base", "spread", "thrust_to_weight", "limits"}, "randomization");
  if (j.contains("mode")) c.mode = randomization_mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("base")) c.base = params_by_name(j.at("base").get<std::string>());
  read(j, "spread", c.spread);
  read_range(j, "thrust_to_weight", c.thrust_to_weight);
  if (j.contains("limits")) {
    const Json& l = j.at("limits");
    check_keys(l,
               {"body_width", "payload_width_ratio", "arm_length_ratio", "arm_radius_ratio",
                "motor_radius_ratio", "rotor_radius_ratio", "density", "settling_time",
                "thrust_to_weight", "torque_to_thrust", "max_mass", "height_ratios"},
               "limits");
    RandomizationLimits& o = c.limits;
    read_range(l, "body_width", o.body_width);
    read_range(l, "payload_width_ratio", o.payload_width_ratio);
    read_range(l, "arm_length_ratio", o.arm_length_ratio);
    read_range(l, "arm_radius_ratio", o.arm_radius_ratio);
    read_range(l, "motor_radius_ratio", o.motor_radius_ratio);
    read_range(l, "rotor_radius_ratio", o.rotor_radius_ratio);
    read_range(l, "density", o.density);
    read_range(l, "settling_time", o.settling_time);
    read_range(l, "thrust_to_weight", o.thrust_to_weight);
    read_range(l, "torque_to_thrust", o.torque_to_thrust);
    read(l, "max_mass", o.max_mass);
    if (l.contains("height_ratios")) {
      const Json& h = l.at("height_ratios");
      check_keys(h, {"body", "payload", "motor", "rotor"}, "height_ratios");
      read(h, "body", o.heights.body);
      read(h, "payload", o.heights.payload);
      read(h, "motor", o.heights.motor);
      read(h, "rotor", o.heights.rotor);
    }
    validate(o);
  }
  return c;
}

Json to_json(const TrainConfig& c) {
  Json j;
  j["iterations"] = c.iterations;
  j["trajectories"] = c.trajectories;
  j["episode"] = to_json(c.episode);
  j["randomization"] = to_json(c.randomization);
  j["gamma"] = c.gamma;
  j["lambda"] = c.lambda;
  j["ppo"] = {{"clip", c.ppo.clip},
              {"epochs", c.ppo.epochs},
              {"minibatch", c.ppo.minibatch},
              {"policy_lr", c.ppo.policy_lr},
              {"value_lr", c.ppo.value_lr},
              {"max_grad_norm", c.ppo.max_grad_norm}};
  j["initial_log_std"] = c.initial_log_std;
  j["seed"] = c.seed;
  return j;
}

TrainConfig train_from_json(const Json& j, TrainConfig c) {
  check_keys(j,
             {"profile", "iterations", "trajectories", "episode", "randomization", "gamma",
              "lambda", "ppo", "initial_log_std", "seed"},
             "train");
  read(j, "iterations", c.iterations);
  read(j, "trajectories", c.trajectories);
  if (j.contains("episode")) c.episode = episode_from_json(j.at("episode"), c.episode);
  if (j.contains("randomization")) {
    c.randomization = randomization_from_json(j.at("randomization"), c.randomization);
  }
  read(j, "gamma", c.gamma);
  read(j, "lambda", c.lambda);
  if (j.contains("ppo")) {
    const Json& p = j.at("ppo");
    check_keys(p, {"clip", "epochs", "minibatch", "policy_lr", "value_lr", "max_grad_norm"},
               "ppo");
    read(p, "clip", c.ppo.clip);
    read(p, "epochs", c.ppo.epochs);
    read(p, "minibatch", c.ppo.minibatch);
    read(p, "policy_lr", c.ppo.policy_lr);
    read(p, "value_lr", c.ppo.value_lr);
    read(p, "max_grad_norm", c.ppo.max_grad_norm);
  }
  read(j, "initial_log_std", c.initial_log_std);
  read(j, "seed", c.seed);
  validate(c);
  return c;
}

TrainConfig load_train_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  const Json j = Json::parse(in);
  TrainConfig base;
  if (j.contains("profile")) {
    const auto profile = j.at("profile").get<std::string>();
    if (profile == "desk") {
      base = desk_scale_config();
    } else if (profile != "full") {
      throw std::invalid_argument("unknown profile: " + profile);
    }
  }
  return train_from_json(j, base);
}

}  // namespace quadsim
