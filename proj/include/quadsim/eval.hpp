#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "quadsim/env.hpp"
#include "quadsim/flight_log.hpp"
#include "quadsim/params.hpp"
#include "quadsim/policy.hpp"

namespace quadsim {

/// Tilt of the body z axis from world z, in degrees; yaw has no effect.
double angular_error_deg(const Mat3& rotation);

/// Intrinsic Z-Y-X roll and pitch, radians.
struct RollPitch {
  double roll;
  double pitch;
};
RollPitch roll_pitch(const Mat3& rotation);

struct SpectrumConfig {
  /// A bin is significant when its magnitude is at least this multiple of the
  /// median non-DC magnitude...
  double median_ratio = 5.0;
  /// ...and at least this fraction of the largest non-DC magnitude.
  double min_fraction_of_peak = 0.1;
};

/// Highest significant frequency of a mean-removed series sampled at
/// `sample_rate`, or nullopt when no bin qualifies.
std::optional<double> highest_significant_frequency(const std::vector<double>& series,
                                                    double sample_rate,
                                                    const SpectrumConfig& cfg = {});

struct HoverReport {
  double position_error = 0.0;     // e_h, m
  double angular_error_deg = 0.0;  // mean tilt, deg
  std::optional<double> oscillation_hz;
  int samples = 0;
};

/// Metrics over the last `window` seconds of a log sampled at `sample_rate`.
/// Throws std::invalid_argument if the log is shorter than the window.
HoverReport hover_metrics(const FlightLog& log, double window, double sample_rate = 100.0,
                          const SpectrumConfig& spectrum = {});

struct TimedPosition {
  double time;
  Vec3 position;
};

struct TrackReport {
  double mean_error = 0.0;  // e_t, m
  double error_std = 0.0;
};

/// Reference positions taken from the goals recorded in the log.
std::vector<TimedPosition> reference_from_log(const FlightLog& log);

/// Mean and standard deviation of |x - x_ref|.  Throws std::invalid_argument
/// when sizes or timestamps (1e-9 s) disagree.
TrackReport track_metrics(const FlightLog& log, const std::vector<TimedPosition>& reference);

/// Deterministic rollout of the mean action until the episode ends.
FlightLog fly(const PolicyNet& policy, QuadEnv& env, const QuadParams& params,
              const QuadState& initial);

struct EvalOptions {
  bool noise = true;
  std::uint64_t seed = 0;
  double hover_duration = 10.0;
  EpisodeConfig episode;  // rates, noise models and goal
};

/// Hover at the goal from rest with level attitude.
HoverReport evaluate_hover(const PolicyNet& policy, const Platform& platform,
                           const EvalOptions& opt, FlightLog* log_out = nullptr);

/// One pass of the figure-eight, starting at rest on its first point.
TrackReport evaluate_track(const PolicyNet& policy, const Platform& platform,
                           const EvalOptions& opt, FlightLog* log_out = nullptr);

struct RecoveryCriteria {
  double position_tol = 0.5;    // m
  double angle_tol_deg = 25.0;
  double hold_time = 1.0;       // s
  double horizon = 5.0;         // s
};

/// True when some interval of hold_time inside the horizon meets both
/// tolerances at every tick.
bool recovered(const FlightLog& log, const RecoveryCriteria& criteria, double tick_dt);

enum class AttitudeSampling {
  kHaar,         // uniform on SO(3)
  kTiltUniform,  // tilt uniform in [0, max_tilt_deg], yaw and tilt axis uniform
};

struct ThrowConfig {
  double max_speed = 4.0;
  double max_angular_speed = 2.0 * kPi;
  double max_offset = 3.0;
  AttitudeSampling attitude = AttitudeSampling::kHaar;
  double max_tilt_deg = 180.0;
  /// Attempts with initial tilt at or below this count as moderate.
  double moderate_tilt_deg = 35.0;
};

QuadState sample_throw(const ThrowConfig& cfg, const Vec3& goal, Rng& rng);

struct RecoveryReport {
  int attempts = 0;
  int recoveries = 0;
  int moderate_attempts = 0;
  int moderate_recoveries = 0;
  int severe_attempts = 0;
  int severe_recoveries = 0;

  /// nullopt when there were no attempts in the group.
  std::optional<double> rate() const;
  std::optional<double> moderate_rate() const;
  std::optional<double> severe_rate() const;
};

RecoveryReport recovery_battery(const PolicyNet& policy, int attempts,
                                const ThrowConfig& throws, const RecoveryCriteria& criteria,
                                const Platform& platform, const EvalOptions& opt);

struct GridRow {
  std::string policy;
  std::string platform;
  HoverReport hover;
  TrackReport track;
};

/// Hover and figure-eight for every (policy, platform) pair.
std::vector<GridRow> grid_eval(const std::vector<std::pair<std::string, PolicyNet>>& policies,
                               const std::vector<Platform>& platforms, const EvalOptions& opt);

/// One line per policy; per platform the mean tilt, oscillation frequency
/// (empty when none) and tracking error.
void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows);

}  // namespace quadsim
