#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "quadsim/dynamics.hpp"
#include "quadsim/sensing.hpp"

namespace quadsim {

/// One policy tick: the state after the tick's dynamics steps, the action
/// that produced it, the goal at that time and the tick's cost.
struct FlightRecord {
  double time = 0.0;
  QuadState state;
  Observation observation = Observation::Zero();
  Action action = Action::Zero();
  Goal goal;
  double cost = 0.0;
};

using FlightLog = std::vector<FlightRecord>;

/// Header of the CSV export, in column order.
const std::vector<std::string>& flight_log_columns();

/// t, x, y, z, vx, vy, vz, r11..r33, wx, wy, wz, a1..a4, gx, gy, gz, cost.
/// Values are printed with 17 significant digits.
void write_csv(std::ostream& out, const FlightLog& log);
void write_csv(const std::string& path, const FlightLog& log);

/// Parses a CSV written by write_csv.  Observations and goal velocities are
/// not part of the format and come back zeroed.
FlightLog read_csv(std::istream& in);
FlightLog read_csv(const std::string& path);

}  // namespace quadsim
