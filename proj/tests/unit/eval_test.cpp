#include <doctest.h>

#include <cmath>
#include <sstream>

#include "quadsim/eval.hpp"
#include "quadsim/random.hpp"

using namespace quadsim;

namespace {

FlightLog synthetic_hover(int n, const Mat3& r, const Vec3& offset) {
  FlightLog log(n);
  for (int i = 0; i < n; ++i) {
    log[i].time = (i + 1) * 0.01;
    log[i].state.position = Vec3(0, 0, 2) + offset;
    log[i].state.rotation = r;
    log[i].goal.position = Vec3(0, 0, 2);
  }
  return log;
}

Platform cf() { return Platform{"cf", nominal_crazyflie(), 1.0}; }

}  // namespace

TEST_CASE("angular error examples") {
  CHECK(angular_error_deg(Mat3::Identity()) == 0.0);
  const Mat3 tilt = rotation_from_tilt(30.0 * kPi / 180.0, 0.3, 0.0);
  CHECK(angular_error_deg(tilt) == doctest::Approx(30.0));
  CHECK(angular_error_deg(rotation_from_tilt(30.0 * kPi / 180.0, 0.3, 1.7)) ==
        doctest::Approx(30.0));
  Mat3 flipped = Mat3::Identity();
  flipped(1, 1) = -1;
  flipped(2, 2) = -1;
  CHECK(angular_error_deg(flipped) == doctest::Approx(180.0));
}

TEST_CASE("roll and pitch recover Z-Y-X angles") {
  const Mat3 r = (Eigen::AngleAxisd(0.4, Vec3::UnitZ()) * Eigen::AngleAxisd(-0.2, Vec3::UnitY()) *
                  Eigen::AngleAxisd(0.3, Vec3::UnitX()))
                     .toRotationMatrix();
  const RollPitch rp = roll_pitch(r);
  CHECK(rp.roll == doctest::Approx(0.3));
  CHECK(rp.pitch == doctest::Approx(-0.2));
}

TEST_CASE("spectrum finds a pure tone and ignores a flat series") {
  std::vector<double> tone(1000);
  for (int i = 0; i < 1000; ++i) tone[i] = 0.3 + std::sin(2.0 * kPi * 2.0 * i / 100.0);
  const auto f = highest_significant_frequency(tone, 100.0);
  REQUIRE(f.has_value());
  CHECK(*f == doctest::Approx(2.0).epsilon(0.01));
  CHECK_FALSE(highest_significant_frequency(std::vector<double>(1000, 1.5), 100.0).has_value());
  // The higher of two strong tones is reported.
  for (int i = 0; i < 1000; ++i) tone[i] += 0.5 * std::sin(2.0 * kPi * 7.0 * i / 100.0);
  CHECK(*highest_significant_frequency(tone, 100.0) == doctest::Approx(7.0).epsilon(0.01));
}

TEST_CASE("hover metrics on a constant offset and tilt") {
  const Mat3 r = rotation_from_tilt(10.0 * kPi / 180.0, 0.0, 0.0);
  const FlightLog log = synthetic_hover(1000, r, Vec3(0.03, 0.04, 0.0));
  const HoverReport rep = hover_metrics(log, 5.0);
  CHECK(rep.samples == 500);
  CHECK(rep.position_error == doctest::Approx(0.05));
  CHECK(rep.angular_error_deg == doctest::Approx(10.0));
  CHECK_FALSE(rep.oscillation_hz.has_value());
  CHECK_THROWS_AS(hover_metrics(log, 20.0), std::invalid_argument);
}

TEST_CASE("track metrics with a constant offset") {
  FlightLog log = synthetic_hover(300, Mat3::Identity(), Vec3(0.2, 0, 0));
  const std::vector<TimedPosition> ref = reference_from_log(log);
  const TrackReport rep = track_metrics(log, ref);
  CHECK(rep.mean_error == doctest::Approx(0.2));
  CHECK(rep.error_std == doctest::Approx(0.0).epsilon(1e-12));
  // Oracle on varying errors.
  double sum = 0.0;
  for (int i = 0; i < 300; ++i) {
    log[i].state.position.y() += 0.001 * i;
    sum += (log[i].state.position - ref[i].position).norm();
  }
  CHECK(track_metrics(log, ref).mean_error == doctest::Approx(sum / 300));
  std::vector<TimedPosition> bad = ref;
  bad[5].time += 0.001;
  CHECK_THROWS_AS(track_metrics(log, bad), std::invalid_argument);
  bad.pop_back();
  CHECK_THROWS_AS(track_metrics(log, bad), std::invalid_argument);
}

TEST_CASE("recovery criterion needs a full hold inside the horizon") {
  FlightLog log = synthetic_hover(500, Mat3::Identity(), Vec3::Zero());
  const RecoveryCriteria crit;
  CHECK(recovered(log, crit, 0.01));
  for (int i = 0; i < 500; ++i) {
    if (i % 90 == 0) log[i].state.position.x() = 1.0;
  }
  CHECK_FALSE(recovered(log, crit, 0.01));
  RecoveryCriteria loose = crit;
  loose.position_tol = 2.0;
  CHECK(recovered(log, loose, 0.01));
}

TEST_CASE("throws respect their bounds") {
  Rng rng(1);
  ThrowConfig cfg;
  cfg.attitude = AttitudeSampling::kTiltUniform;
  cfg.max_tilt_deg = 35.0;
  for (int i = 0; i < 2000; ++i) {
    const QuadState s = sample_throw(cfg, Vec3(0, 0, 2), rng);
    REQUIRE(s.velocity.norm() <= 4.0);
    REQUIRE(s.omega.norm() <= 2.0 * kPi);
    REQUIRE((s.position - Vec3(0, 0, 2)).norm() <= 3.0);
    REQUIRE(angular_error_deg(s.rotation) <= 35.0 + 1e-9);
  }
}

TEST_CASE("recovery battery edge cases") {
  const PolicyNet zero;  // constant mid thrust: falls
  EvalOptions opt;
  const RecoveryReport none =
      recovery_battery(zero, 0, ThrowConfig{}, RecoveryCriteria{}, cf(), opt);
  CHECK(none.attempts == 0);
  CHECK_FALSE(none.rate().has_value());
  const RecoveryReport rep =
      recovery_battery(zero, 10, ThrowConfig{}, RecoveryCriteria{}, cf(), opt);
  CHECK(rep.attempts == 10);
  CHECK(rep.moderate_attempts + rep.severe_attempts == 10);
  CHECK(*rep.rate() == 0.0);
  RecoveryCriteria everything;
  everything.position_tol = 1e9;
  everything.angle_tol_deg = 181.0;
  const RecoveryReport all = recovery_battery(zero, 10, ThrowConfig{}, everything, cf(), opt);
  CHECK(*all.rate() == 1.0);
  // Same seed, same outcome.
  const RecoveryReport again =
      recovery_battery(zero, 10, ThrowConfig{}, RecoveryCriteria{}, cf(), opt);
  CHECK(again.moderate_attempts == rep.moderate_attempts);
}

TEST_CASE("grid evaluation shape and csv") {
  EvalOptions opt;
  opt.hover_duration = 3.0;
  const std::vector<std::pair<std::string, PolicyNet>> policies = {{"a", PolicyNet{}},
                                                                   {"b", PolicyNet{}}};
  const std::vector<Platform> platforms = {platform_preset("cf"), platform_preset("small")};
  const std::vector<GridRow> rows = grid_eval(policies, platforms, opt);
  CHECK(rows.size() == 4);
  std::ostringstream out;
  write_grid_csv(out, rows);
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.find("cf_e_theta") != std::string::npos);
  CHECK(header.find("small_e_t") != std::string::npos);
  int lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 2);
}

TEST_CASE("evaluation is deterministic") {
  Rng rng(3);
  const PolicyNet p = PolicyNet::initialized(rng);
  EvalOptions opt;
  opt.hover_duration = 2.0;
  FlightLog a;
  FlightLog b;
  evaluate_hover(p, cf(), opt, &a);
  evaluate_hover(p, cf(), opt, &b);
  REQUIRE(a.size() == b.size());
  CHECK(a.back().state.position == b.back().state.position);
}
