#pragma once

#include <array>
#include <string>
#include <vector>

#include "quadsim/inertia.hpp"
#include "quadsim/types.hpp"

namespace quadsim {

constexpr double kDefaultDynamicsDt = 0.005;
constexpr double kPi = 3.14159265358979323846;

/// Heights are not independent variables; each is a fixed fraction of the
/// matching width (diameter for round parts).
struct HeightRatios {
  double body = 0.3;
  double payload = 0.3;
  double motor = 0.3;
  double rotor = 0.05;
};

/// Generalized x-configuration quadrotor.  Motor 1 is front-right (+x, -y);
/// motors are indexed clockwise when viewed from above.
struct Geometry {
  double body_width = 0.0;
  double body_height = 0.0;
  double payload_width = 0.0;
  double payload_height = 0.0;
  double arm_length = 0.0;  // center to motor axis
  double arm_angle = kPi / 4.0;
  double arm_radius = 0.0;
  double motor_radius = 0.0;
  double motor_height = 0.0;
  double rotor_radius = 0.0;
  double rotor_height = 0.0;
  /// Relative to the center of mass, filled in by assemble().
  std::array<Vec3, 4> motor_positions{};
};

/// Per-part masses; arm/motor/rotor entries are for one of four.
struct ComponentMasses {
  double body = 0.0;
  double payload = 0.0;
  double arm = 0.0;
  double motor = 0.0;
  double rotor = 0.0;

  double total() const { return body + payload + 4.0 * (arm + motor + rotor); }
};

struct QuadParams {
  double mass = 0.0;
  Mat3 inertia = Mat3::Zero();
  double thrust_to_weight = 0.0;
  double torque_to_thrust = 0.0;
  double settling_time = 0.0;
  Geometry geometry;
  ComponentMasses component_masses;
  /// 0.25 * g * m * thrust_to_weight.
  double f_max = 0.0;
};

/// Lays out the five component classes, moves the origin to the composite
/// center of mass and derives mass, inertia, motor positions and f_max.
QuadParams assemble(const Geometry& geometry, const ComponentMasses& masses,
                    double thrust_to_weight, double torque_to_thrust,
                    double settling_time);

/// The rigid components of a geometry, offsets relative to the center of mass.
std::vector<Component> components_of(const Geometry& geometry,
                                     const ComponentMasses& masses);

/// Throws std::invalid_argument naming the first violated invariant.
void validate(const QuadParams& params, double dynamics_dt = kDefaultDynamicsDt);

/// Crazyflie 2.0 estimate: 28 g, 65 mm body, T = 0.15 s, t2w 1.9, t2t 0.006.
QuadParams nominal_crazyflie();

/// Robot presets "cf", "small" and "medium".
struct Platform {
  std::string name;
  QuadParams params;
  /// Upper clamp on the normalized thrust command (1 = uncapped).
  double thrust_command_limit = 1.0;
};

Platform platform_preset(const std::string& name);
std::vector<std::string> platform_names();

template <class T>
struct Range {
  T lo;
  T hi;
};

/// Bounds for sampling a quadrotor with no nominal estimate.  Geometry
/// entries marked "ratio" are fractions of the sampled body width.
struct RandomizationLimits {
  Range<double> body_width{0.05, 0.2};
  Range<double> payload_width_ratio{0.3, 1.0};
  Range<double> arm_length_ratio{0.6, 1.2};
  Range<double> arm_radius_ratio{0.02, 0.06};
  Range<double> motor_radius_ratio{0.04, 0.1};
  Range<double> rotor_radius_ratio{0.25, 0.5};
  Range<double> density{200.0, 1800.0};  // kg/m^3, per component class
  Range<double> settling_time{0.1, 0.2};
  Range<double> thrust_to_weight{1.8, 2.5};
  Range<double> torque_to_thrust{0.005, 0.02};
  double max_mass = 5.0;
  HeightRatios heights;
};

void validate(const RandomizationLimits& limits);

constexpr int kMaxRejectionRetries = 100;

/// Every scalar drawn from N(nominal, (spread * nominal)^2); invalid draws are
/// redrawn up to kMaxRejectionRetries times, then std::runtime_error.
QuadParams sample_nominal(const QuadParams& base, double spread, Rng& rng,
                          double dynamics_dt = kDefaultDynamicsDt);

/// Uniform sampling within limits, body width first, mass from densities.
QuadParams sample_total(const RandomizationLimits& limits, Rng& rng,
                        double dynamics_dt = kDefaultDynamicsDt);

/// Copy of base with only the thrust-to-weight ratio drawn uniformly.
QuadParams sample_thrust_to_weight(const QuadParams& base,
                                   Range<double> thrust_to_weight, Rng& rng);

}  // namespace quadsim
