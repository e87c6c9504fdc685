#include "quadsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace quadsim {

Goal FigureEight::at(double t) const {
  Goal g;
  const double w = 2.0 * kPi / period;
  const double tc = std::clamp(t, 0.0, period);
  g.position = Vec3(amplitude_x * std::sin(w * tc),
                    0.5 * amplitude_y * std::sin(2.0 * w * tc), altitude);
  if (t >= 0.0 && t <= period) {
    g.velocity = Vec3(amplitude_x * w * std::cos(w * tc),
                      amplitude_y * w * std::cos(2.0 * w * tc), 0.0);
  }
  return g;
}

double FigureEight::peak_speed() const {
  const double w = 2.0 * kPi / period;
  return w * std::hypot(amplitude_x, amplitude_y);
}

double FigureEight::peak_acceleration(int samples) const {
  const double w = 2.0 * kPi / period;
  double best = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double u = w * period * i / samples;
    const double ax = amplitude_x * w * w * std::sin(u);
    const double ay = 2.0 * amplitude_y * w * w * std::sin(2.0 * u);
    best = std::max(best, std::hypot(ax, ay));
  }
  return best;
}

FigureEight solve_figure_eight(double period, double peak_speed, double peak_accel,
                               double altitude) {
  if (!(period > 0.0 && peak_speed > 0.0 && peak_accel > 0.0)) {
    throw std::invalid_argument("solve_figure_eight: targets must be positive");
  }
  const double radius = peak_speed * period / (2.0 * kPi);
  auto curve = [&](double ratio) {
    FigureEight f;
    f.period = period;
    f.altitude = altitude;
    f.amplitude_x = radius / std::sqrt(1.0 + ratio * ratio);
    f.amplitude_y = ratio * f.amplitude_x;
    return f;
  };
  // Peak acceleration grows monotonically with B / A on [0, 1].
  double lo = 0.0;
  double hi = 1.0;
  if (curve(hi).peak_acceleration() <= peak_accel) return curve(hi);
  if (curve(lo).peak_acceleration() >= peak_accel) return curve(lo);
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (curve(mid).peak_acceleration() < peak_accel ? lo : hi) = mid;
  }
  return curve(0.5 * (lo + hi));
}

const FigureEight& default_figure_eight() {
  static const FigureEight curve = solve_figure_eight(5.5, 1.6, 5.4);
  return curve;
}

}  // namespace quadsim
