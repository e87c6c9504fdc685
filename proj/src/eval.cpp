#include "quadsim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <unsupported/Eigen/FFT>

#include "quadsim/random.hpp"

namespace quadsim {

namespace {
constexpr double kRadToDeg = 180.0 / kPi;
// Pitch within this many degrees of +-90 makes roll ill-defined.
constexpr double kGimbalMarginDeg = 1.0;
}  // namespace

double angular_error_deg(const Mat3& rotation) {
  return std::acos(std::clamp(rotation(2, 2), -1.0, 1.0)) * kRadToDeg;
}

RollPitch roll_pitch(const Mat3& r) {
  return {std::atan2(r(2, 1), r(2, 2)), -std::asin(std::clamp(r(2, 0), -1.0, 1.0))};
}

std::optional<double> highest_significant_frequency(const std::vector<double>& series,
                                                    double sample_rate,
                                                    const SpectrumConfig& cfg) {
  const std::size_t n = series.size();
  if (n < 4) return std::nullopt;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> centered(n);
  for (std::size_t i = 0; i < n; ++i) centered[i] = series[i] - mean;

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, centered);

  const std::size_t bins = n / 2;  // 1..n/2 are the non-DC bins up to Nyquist
  std::vector<double> mags(bins);
  for (std::size_t k = 1; k <= bins; ++k) mags[k - 1] = std::abs(spectrum[k]);
  std::vector<double> sorted = mags;
  std::nth_element(sorted.begin(), sorted.begin() + bins / 2, sorted.end());
  const double median = sorted[bins / 2];
  const double peak = *std::max_element(mags.begin(), mags.end());
  // Below this the series is flat up to rounding.
  if (peak <= 1e-12 * static_cast<double>(n)) return std::nullopt;

  const double threshold = std::max(cfg.median_ratio * median, cfg.min_fraction_of_peak * peak);
  for (std::size_t k = bins; k >= 1; --k) {
    if (mags[k - 1] >= threshold) {
      return static_cast<double>(k) * sample_rate / static_cast<double>(n);
    }
  }
  return std::nullopt;
}

HoverReport hover_metrics(const FlightLog& log, double window, double sample_rate,
                          const SpectrumConfig& spectrum) {
  const auto needed = static_cast<std::size_t>(std::llround(window * sample_rate));
  if (needed == 0 || log.size() < needed) {
    throw std::invalid_argument("hover_metrics: log shorter than the window");
  }
  HoverReport report;
  std::vector<double> roll, pitch;
  roll.reserve(needed);
  pitch.reserve(needed);
  for (std::size_t i = log.size() - needed; i < log.size(); ++i) {
    const FlightRecord& r = log[i];
    report.position_error += (r.state.position - r.goal.position).norm();
    report.angular_error_deg += angular_error_deg(r.state.rotation);
    const RollPitch rp = roll_pitch(r.state.rotation);
    if (std::abs(std::abs(rp.pitch) * kRadToDeg - 90.0) > kGimbalMarginDeg) {
      roll.push_back(rp.roll);
      pitch.push_back(rp.pitch);
    }
  }
  report.samples = static_cast<int>(needed);
  report.position_error /= static_cast<double>(needed);
  report.angular_error_deg /= static_cast<double>(needed);

  const auto f_roll = highest_significant_frequency(roll, sample_rate, spectrum);
  const auto f_pitch = highest_significant_frequency(pitch, sample_rate, spectrum);
  if (f_roll || f_pitch) {
    report.oscillation_hz = std::max(f_roll.value_or(0.0), f_pitch.value_or(0.0));
  }
  return report;
}

std::vector<TimedPosition> reference_from_log(const FlightLog& log) {
  std::vector<TimedPosition> ref;
  ref.reserve(log.size());
  for (const auto& r : log) ref.push_back({r.time, r.goal.position});
  return ref;
}

TrackReport track_metrics(const FlightLog& log, const std::vector<TimedPosition>& reference) {
  if (log.size() != reference.size() || log.empty()) {
    throw std::invalid_argument("track_metrics: log and reference lengths differ");
  }
  std::vector<double> errors(log.size());
  for (std::size_t i = 0; i < log.size(); ++i) {
    if (std::abs(log[i].time - reference[i].time) > 1e-9) {
      throw std::invalid_argument("track_metrics: misaligned timestamps");
    }
    errors[i] = (log[i].state.position - reference[i].position).norm();
  }
  const double n = static_cast<double>(errors.size());
  TrackReport rep;
  for (double e : errors) rep.mean_error += e;
  rep.mean_error /= n;
  double var = 0.0;
  for (double e : errors) var += (e - rep.mean_error) * (e - rep.mean_error);
  rep.error_std = std::sqrt(var / n);
  return rep;
}

FlightLog fly(const PolicyNet& policy, QuadEnv& env, const QuadParams& params,
              const QuadState& initial) {
  env.set_logging(true);
  Observation obs = env.reset(params, initial);
  while (!env.done()) {
    const VectorXd a = forward(policy, obs);
    obs = env.step(Action(a)).observation;
  }
  return env.log();
}

namespace {

EpisodeConfig eval_episode(const Platform& platform, const EvalOptions& opt) {
  EpisodeConfig cfg = opt.episode;
  cfg.noise = opt.noise;
  cfg.thrust_command_limit = platform.thrust_command_limit;
  cfg.abort_radius = 0.0;
  return cfg;
}

}  // namespace

HoverReport evaluate_hover(const PolicyNet& policy, const Platform& platform,
                           const EvalOptions& opt, FlightLog* log_out) {
  EpisodeConfig cfg = eval_episode(platform, opt);
  cfg.scenario = Scenario::kHover;
  cfg.duration = opt.hover_duration;
  QuadEnv env(cfg, opt.seed);
  QuadState start;
  start.position = cfg.hover_goal;
  const FlightLog log = fly(policy, env, platform.params, start);
  if (log_out) *log_out = log;
  return hover_metrics(log, opt.hover_duration, cfg.policy_rate);
}

TrackReport evaluate_track(const PolicyNet& policy, const Platform& platform,
                           const EvalOptions& opt, FlightLog* log_out) {
  EpisodeConfig cfg = eval_episode(platform, opt);
  cfg.scenario = Scenario::kFigureEight;
  cfg.duration = cfg.figure_eight.period;
  QuadEnv env(cfg, opt.seed);
  QuadState start;
  start.position = env.goal_at(0.0).position;
  const FlightLog log = fly(policy, env, platform.params, start);
  if (log_out) *log_out = log;
  return track_metrics(log, reference_from_log(log));
}

bool recovered(const FlightLog& log, const RecoveryCriteria& c, double tick_dt) {
  const int hold_ticks = static_cast<int>(std::llround(c.hold_time / tick_dt));
  int streak = 0;
  for (const auto& r : log) {
    if (r.time > c.horizon + 1e-9) break;
    const bool ok = (r.state.position - r.goal.position).norm() < c.position_tol &&
                    angular_error_deg(r.state.rotation) < c.angle_tol_deg;
    streak = ok ? streak + 1 : 0;
    if (streak >= hold_ticks) return true;
  }
  return false;
}

QuadState sample_throw(const ThrowConfig& cfg, const Vec3& goal, Rng& rng) {
  QuadState s;
  if (cfg.attitude == AttitudeSampling::kHaar) {
    s.rotation = uniform_rotation(rng);
  } else {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double tilt = u(rng) * cfg.max_tilt_deg / kRadToDeg;
    const double azimuth = 2.0 * kPi * u(rng);
    const double yaw = 2.0 * kPi * u(rng);
    s.rotation = rotation_from_tilt(tilt, azimuth, yaw);
  }
  s.position = goal + bounded_vector(cfg.max_offset, rng);
  s.velocity = bounded_vector(cfg.max_speed, rng);
  s.omega = bounded_vector(cfg.max_angular_speed, rng);
  return s;
}

std::optional<double> RecoveryReport::rate() const {
  if (attempts == 0) return std::nullopt;
  return static_cast<double>(recoveries) / attempts;
}
std::optional<double> RecoveryReport::moderate_rate() const {
  if (moderate_attempts == 0) return std::nullopt;
  return static_cast<double>(moderate_recoveries) / moderate_attempts;
}
std::optional<double> RecoveryReport::severe_rate() const {
  if (severe_attempts == 0) return std::nullopt;
  return static_cast<double>(severe_recoveries) / severe_attempts;
}

RecoveryReport recovery_battery(const PolicyNet& policy, int attempts,
                                const ThrowConfig& throws, const RecoveryCriteria& criteria,
                                const Platform& platform, const EvalOptions& opt) {
  RecoveryReport report;
  if (attempts <= 0) return report;
  EpisodeConfig cfg = eval_episode(platform, opt);
  cfg.scenario = Scenario::kHover;
  cfg.duration = criteria.horizon;
  QuadEnv env(cfg, opt.seed);
  Rng throw_rng(opt.seed ^ 0x9e3779b97f4a7c15ull);
  for (int i = 0; i < attempts; ++i) {
    const QuadState start = sample_throw(throws, cfg.hover_goal, throw_rng);
    const bool moderate = angular_error_deg(start.rotation) <= throws.moderate_tilt_deg;
    const FlightLog log = fly(policy, env, platform.params, start);
    const bool ok = recovered(log, criteria, cfg.policy_dt());
    ++report.attempts;
    report.recoveries += ok;
    if (moderate) {
      ++report.moderate_attempts;
      report.moderate_recoveries += ok;
    } else {
      ++report.severe_attempts;
      report.severe_recoveries += ok;
    }
  }
  return report;
}

std::vector<GridRow> grid_eval(const std::vector<std::pair<std::string, PolicyNet>>& policies,
                               const std::vector<Platform>& platforms, const EvalOptions& opt) {
  std::vector<GridRow> rows;
  for (const auto& [name, net] : policies) {
    for (const auto& platform : platforms) {
      GridRow row;
      row.policy = name;
      row.platform = platform.name;
      row.hover = evaluate_hover(net, platform, opt);
      row.track = evaluate_track(net, platform, opt);
      rows.push_back(row);
    }
  }
  return rows;
}

void write_grid_csv(std::ostream& out, const std::vector<GridRow>& rows) {
  std::vector<std::string> platforms;
  std::vector<std::string> policies;
  for (const auto& r : rows) {
    if (std::find(platforms.begin(), platforms.end(), r.platform) == platforms.end()) {
      platforms.push_back(r.platform);
    }
    if (std::find(policies.begin(), policies.end(), r.policy) == policies.end()) {
      policies.push_back(r.policy);
    }
  }
  out << "policy";
  for (const auto& p : platforms) out << ',' << p << "_e_theta," << p << "_f_o," << p << "_e_t";
  out << '\n' << std::setprecision(6);
  for (const auto& pol : policies) {
    out << pol;
    for (const auto& plat : platforms) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const GridRow& r) {
        return r.policy == pol && r.platform == plat;
      });
      if (it == rows.end()) {
        out << ",,,";
        continue;
      }
      out << ',' << it->hover.angular_error_deg << ',';
      if (it->hover.oscillation_hz) out << *it->hover.oscillation_hz;
      out << ',' << it->track.mean_error;
    }
    out << '\n';
  }
}

}  // namespace quadsim
