#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "quadsim/config.hpp"

using namespace quadsim;

TEST_CASE("training config survives a JSON round trip") {
  TrainConfig cfg;
  cfg.iterations = 17;
  cfg.seed = 99;
  cfg.episode.weights.omega = 1.0;
  cfg.episode.scenario = Scenario::kFigureEight;
  cfg.episode.noise = false;
  cfg.randomization.mode = RandomizationMode::kTotal;
  cfg.ppo.clip = 0.1;
  const TrainConfig back = train_from_json(to_json(cfg));
  CHECK(to_json(back) == to_json(cfg));
  CHECK(back.iterations == 17);
  CHECK(back.episode.weights.omega == 1.0);
  CHECK(back.randomization.mode == RandomizationMode::kTotal);
}

TEST_CASE("partial JSON keeps defaults and unknown keys are rejected") {
  const TrainConfig cfg = train_from_json(Json::parse(R"({"iterations": 5})"));
  CHECK(cfg.iterations == 5);
  CHECK(cfg.trajectories == 40);
  CHECK_THROWS_AS(train_from_json(Json::parse(R"({"iteratons": 5})")), std::invalid_argument);
  CHECK_THROWS_AS(episode_from_json(Json::parse(R"({"weights": {"omegaa": 1}})")),
                  std::invalid_argument);
}

TEST_CASE("names map both ways") {
  for (auto mode : {RandomizationMode::kNone, RandomizationMode::kNominal,
                    RandomizationMode::kTotal, RandomizationMode::kThrustToWeight}) {
    CHECK(randomization_mode_from_string(to_string(mode)) == mode);
  }
  CHECK_THROWS(randomization_mode_from_string("bogus"));
  CHECK(params_by_name("crazyflie").mass == doctest::Approx(0.028));
  CHECK(params_by_name("medium").mass == doctest::Approx(0.124));
  CHECK_THROWS(params_by_name("bogus"));
}

TEST_CASE("desk profile from file") {
  const auto path = std::filesystem::path(QUADSIM_TEST_TMP) / "config_test.json";
  std::ofstream(path) << R"({"profile": "desk", "seed": 3})";
  const TrainConfig cfg = load_train_config(path.string());
  CHECK(cfg.iterations == 300);
  CHECK(cfg.episode.duration == 3.0);
  CHECK(cfg.seed == 3);
  std::filesystem::remove(path);
}
