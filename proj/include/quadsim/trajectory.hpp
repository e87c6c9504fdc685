#pragma once

#include "quadsim/sensing.hpp"

namespace quadsim {

/// Gerono lemniscate in the horizontal plane:
///   x = A sin(2 pi t / P),  y = (B / 2) sin(4 pi t / P),  z = altitude.
struct FigureEight {
  double period = 5.5;
  double amplitude_x = 0.0;
  double amplitude_y = 0.0;
  double altitude = 2.0;

  /// Position and analytic velocity.  Outside [0, period] the goal holds the
  /// endpoint with zero velocity.
  Goal at(double t) const;

  double peak_speed() const;
  /// Dense-sampled maximum of the acceleration norm.
  double peak_acceleration(int samples = 20000) const;
};

/// Amplitudes that give exactly `peak_speed` and come as close to
/// `peak_accel` as the curve allows with B <= A.  The peak speed of this curve
/// is reached at t = 0 where it equals (2 pi / P) sqrt(A^2 + B^2).
FigureEight solve_figure_eight(double period, double peak_speed, double peak_accel,
                               double altitude = 2.0);

/// 5.5 s figure-eight at 2 m altitude aimed at 1.6 m/s and 5.4 m/s^2; solved
/// once per process.
const FigureEight& default_figure_eight();

}  // namespace quadsim
