#include "quadsim/flight_log.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace quadsim {

const std::vector<std::string>& flight_log_columns() {
  static const std::vector<std::string> columns = {
      "t",   "x",   "y",   "z",   "vx",  "vy",  "vz",  "r11", "r12", "r13",
      "r21", "r22", "r23", "r31", "r32", "r33", "wx",  "wy",  "wz",  "a1",
      "a2",  "a3",  "a4",  "gx",  "gy",  "gz",  "cost"};
  return columns;
}

void write_csv(std::ostream& out, const FlightLog& log) {
  const auto& columns = flight_log_columns();
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out << (i ? "," : "") << columns[i];
  }
  out << '\n';
  out << std::setprecision(17);
  for (const auto& r : log) {
    const QuadState& s = r.state;
    out << r.time;
    for (int i = 0; i < 3; ++i) out << ',' << s.position[i];
    for (int i = 0; i < 3; ++i) out << ',' << s.velocity[i];
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) out << ',' << s.rotation(row, col);
    }
    for (int i = 0; i < 3; ++i) out << ',' << s.omega[i];
    for (int i = 0; i < 4; ++i) out << ',' << r.action[i];
    for (int i = 0; i < 3; ++i) out << ',' << r.goal.position[i];
    out << ',' << r.cost << '\n';
  }
}

void write_csv(const std::string& path, const FlightLog& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(out, log);
}

FlightLog read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("flight log: empty input");
  const std::size_t n_cols = flight_log_columns().size();
  FlightLog log;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    v.reserve(n_cols);
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != n_cols) {
      throw std::runtime_error("flight log: wrong column count on line " +
                               std::to_string(line_no));
    }
    FlightRecord r;
    r.time = v[0];
    r.state.position = Vec3(v[1], v[2], v[3]);
    r.state.velocity = Vec3(v[4], v[5], v[6]);
    for (int row = 0; row < 3; ++row) {
      for (int col = 0; col < 3; ++col) r.state.rotation(row, col) = v[7 + 3 * row + col];
    }
    r.state.omega = Vec3(v[16], v[17], v[18]);
    r.action = Action(v[19], v[20], v[21], v[22]);
    r.goal.position = Vec3(v[23], v[24], v[25]);
    r.cost = v[26];
    log.push_back(r);
  }
  return log;
}

FlightLog read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

}  // namespace quadsim
