#include "quadsim/params.hpp"

#include <cmath>
#include <stdexcept>

namespace quadsim {

namespace {

// Unit vectors from the body center to motors 1..4 (clockwise from
// front-right when viewed from above).
std::array<Vec3, 4> arm_directions(double arm_angle) {
  const double c = std::cos(arm_angle);
  const double s = std::sin(arm_angle);
  return {Vec3(c, -s, 0.0), Vec3(-c, -s, 0.0), Vec3(-c, s, 0.0), Vec3(c, s, 0.0)};
}

Geometry with_heights(Geometry g, const HeightRatios& h) {
  g.body_height = h.body * g.body_width;
  g.payload_height = h.payload * g.payload_width;
  g.motor_height = h.motor * 2.0 * g.motor_radius;
  g.rotor_height = h.rotor * 2.0 * g.rotor_radius;
  return g;
}

// Layout before centering: body box at the origin, payload hanging below,
// motors on top of the arm tips, rotors on top of the motors.
std::vector<Component> raw_components(const Geometry& g, const ComponentMasses& m) {
  std::vector<Component> parts;
  parts.reserve(14);
  parts.push_back({m.body, Box{Vec3(g.body_width, g.body_width, g.body_height)},
                   Vec3::Zero()});
  parts.push_back({m.payload,
                   Box{Vec3(g.payload_width, g.payload_width, g.payload_height)},
                   Vec3(0.0, 0.0, -0.5 * (g.body_height + g.payload_height))});
  for (const Vec3& dir : arm_directions(g.arm_angle)) {
    parts.push_back({m.arm, Rod{g.arm_length, dir}, 0.5 * g.arm_length * dir});
    parts.push_back({m.motor, Cylinder{g.motor_radius, g.motor_height},
                     g.arm_length * dir + Vec3(0.0, 0.0, 0.5 * g.motor_height)});
    parts.push_back({m.rotor, Cylinder{g.rotor_radius, g.rotor_height},
                     g.arm_length * dir +
                         Vec3(0.0, 0.0, g.motor_height + 0.5 * g.rotor_height)});
  }
  return parts;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

bool is_spd(const Mat3& m) {
  if (!m.isApprox(m.transpose(), 1e-12)) return false;
  Eigen::LLT<Mat3> llt(m);
  return llt.info() == Eigen::Success;
}

}  // namespace

std::vector<Component> components_of(const Geometry& geometry,
                                     const ComponentMasses& masses) {
  auto parts = raw_components(geometry, masses);
  const Vec3 com = center_of_mass(parts);
  for (auto& p : parts) p.offset -= com;
  return parts;
}

QuadParams assemble(const Geometry& geometry, const ComponentMasses& masses,
                    double thrust_to_weight, double torque_to_thrust,
                    double settling_time) {
  QuadParams p;
  p.geometry = geometry;
  p.component_masses = masses;
  p.thrust_to_weight = thrust_to_weight;
  p.torque_to_thrust = torque_to_thrust;
  p.settling_time = settling_time;

  auto raw = raw_components(geometry, masses);
  const Vec3 com = center_of_mass(raw);
  for (auto& c : raw) c.offset -= com;
  p.inertia = compose_inertia(raw);
  // Exact symmetrization; the parallel-axis sum is symmetric up to rounding.
  p.inertia = 0.5 * (p.inertia + p.inertia.transpose()).eval();

  const auto dirs = arm_directions(geometry.arm_angle);
  for (int i = 0; i < 4; ++i) {
    p.geometry.motor_positions[i] = geometry.arm_length * dirs[i] - com;
  }
  p.mass = masses.total();
  p.f_max = 0.25 * kGravity * p.mass * p.thrust_to_weight;
  return p;
}

void validate(const QuadParams& p, double dynamics_dt) {
  const Geometry& g = p.geometry;
  require(p.mass > 0.0, "mass must be positive");
  require(g.body_width > 0.0 && g.body_height > 0.0 && g.payload_width > 0.0 &&
              g.payload_height > 0.0 && g.arm_length > 0.0 && g.arm_radius > 0.0 &&
              g.motor_radius > 0.0 && g.motor_height > 0.0 &&
              g.rotor_radius > 0.0 && g.rotor_height > 0.0,
          "all lengths must be positive");
  require(p.thrust_to_weight > 1.0, "thrust_to_weight must exceed 1");
  require(p.torque_to_thrust > 0.0, "torque_to_thrust must be positive");
  require(p.settling_time >= 4.0 * dynamics_dt - 1e-12,
          "settling_time must be at least 4 * dt");
  require(is_spd(p.inertia), "inertia must be symmetric positive definite");
  require(std::abs(p.f_max - 0.25 * kGravity * p.mass * p.thrust_to_weight) <=
              1e-15 * std::max(1.0, p.f_max),
          "f_max inconsistent with mass and thrust_to_weight");
}

QuadParams nominal_crazyflie() {
  Geometry g;
  g.body_width = 0.065;
  g.payload_width = 0.03;
  g.arm_length = 0.046;
  g.arm_radius = 0.002;
  g.motor_radius = 0.0035;
  g.rotor_radius = 0.022;
  g = with_heights(g, HeightRatios{});

  ComponentMasses m;
  m.body = 0.012;
  m.payload = 0.008;
  m.arm = 0.0005;
  m.motor = 0.0012;
  m.rotor = 0.0003;
  return assemble(g, m, 1.9, 0.006, 0.15);
}

std::vector<std::string> platform_names() { return {"cf", "small", "medium"}; }

Platform platform_preset(const std::string& name) {
  struct Spec {
    double mass, body_width, rotor_radius, t2w, limit;
  };
  Spec s{};
  if (name == "cf") {
    s = {0.033, 0.065, 0.022, 1.9, 1.0};
  } else if (name == "small") {
    s = {0.073, 0.085, 0.033, 2.0, 1.0};
  } else if (name == "medium") {
    s = {0.124, 0.090, 0.035, 2.7, 0.6};
  } else {
    throw std::invalid_argument("unknown platform preset: " + name);
  }

  // Crazyflie proportions, rescaled to the preset's width, rotor and mass.
  const QuadParams cf = nominal_crazyflie();
  const double k = s.body_width / cf.geometry.body_width;
  Geometry g = cf.geometry;
  g.body_width = s.body_width;
  g.payload_width *= k;
  g.arm_length *= k;
  g.arm_radius *= k;
  g.motor_radius *= k;
  g.rotor_radius = s.rotor_radius;
  g = with_heights(g, HeightRatios{});

  ComponentMasses m = cf.component_masses;
  const double scale = s.mass / m.total();
  m.body *= scale;
  m.payload *= scale;
  m.arm *= scale;
  m.motor *= scale;
  m.rotor *= scale;

  Platform out;
  out.name = name;
  out.params = assemble(g, m, s.t2w, cf.torque_to_thrust, cf.settling_time);
  out.thrust_command_limit = s.limit;
  return out;
}

void validate(const RandomizationLimits& l) {
  auto check = [](Range<double> r, const char* what) {
    if (!(r.lo > 0.0 && r.lo < r.hi)) {
      throw std::invalid_argument(std::string("invalid randomization range: ") + what);
    }
  };
  check(l.body_width, "body_width");
  check(l.payload_width_ratio, "payload_width_ratio");
  check(l.arm_length_ratio, "arm_length_ratio");
  check(l.arm_radius_ratio, "arm_radius_ratio");
  check(l.motor_radius_ratio, "motor_radius_ratio");
  check(l.rotor_radius_ratio, "rotor_radius_ratio");
  check(l.density, "density");
  check(l.settling_time, "settling_time");
  check(l.thrust_to_weight, "thrust_to_weight");
  check(l.torque_to_thrust, "torque_to_thrust");
  if (!(l.max_mass > 0.0)) throw std::invalid_argument("max_mass must be positive");
  if (l.thrust_to_weight.lo <= 1.0) {
    throw std::invalid_argument("thrust_to_weight lower bound must exceed 1");
  }
}

QuadParams sample_nominal(const QuadParams& base, double spread, Rng& rng,
                          double dynamics_dt) {
  if (!(spread >= 0.0 && spread < 1.0)) {
    throw std::invalid_argument("sample_nominal: spread must be in [0, 1)");
  }
  std::normal_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double nominal) { return nominal + spread * nominal * unit(rng); };

  const Geometry& bg = base.geometry;
  for (int attempt = 0; attempt < kMaxRejectionRetries; ++attempt) {
    const double mass = draw(base.mass);
    Geometry g = bg;
    g.body_width = draw(bg.body_width);
    g.payload_width = draw(bg.payload_width);
    g.arm_length = draw(bg.arm_length);
    g.arm_radius = draw(bg.arm_radius);
    g.motor_radius = draw(bg.motor_radius);
    g.rotor_radius = draw(bg.rotor_radius);
    const double t2w = draw(base.thrust_to_weight);
    const double t2t = draw(base.torque_to_thrust);
    const double settling = draw(base.settling_time);

    // Heights keep their proportion to the sampled widths.
    g.body_height = bg.body_height * g.body_width / bg.body_width;
    g.payload_height = bg.payload_height * g.payload_width / bg.payload_width;
    g.motor_height = bg.motor_height * g.motor_radius / bg.motor_radius;
    g.rotor_height = bg.rotor_height * g.rotor_radius / bg.rotor_radius;

    if (!(mass > 0.0) || !(g.body_width > 0.0) || !(g.payload_width > 0.0) ||
        !(g.arm_length > 0.0) || !(g.arm_radius > 0.0) || !(g.motor_radius > 0.0) ||
        !(g.rotor_radius > 0.0) || !(t2w > 1.0) || !(t2t > 0.0) ||
        settling < 4.0 * dynamics_dt) {
      continue;
    }

    ComponentMasses m = base.component_masses;
    const double scale = mass / m.total();
    m.body *= scale;
    m.payload *= scale;
    m.arm *= scale;
    m.motor *= scale;
    m.rotor *= scale;

    QuadParams out = assemble(g, m, t2w, t2t, settling);
    // Keep the drawn mass exactly rather than the re-summed components.
    out.mass = mass;
    out.f_max = 0.25 * kGravity * out.mass * out.thrust_to_weight;
    try {
      validate(out, dynamics_dt);
    } catch (const std::invalid_argument&) {
      continue;
    }
    return out;
  }
  throw std::runtime_error("sample_nominal: no valid draw after retries; spread too large");
}

QuadParams sample_total(const RandomizationLimits& limits, Rng& rng,
                        double dynamics_dt) {
  validate(limits);
  auto uniform = [&rng](Range<double> r) {
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
  };

  for (int attempt = 0; attempt < kMaxRejectionRetries; ++attempt) {
    Geometry g;
    g.body_width = uniform(limits.body_width);
    const double w = g.body_width;
    g.payload_width = w * uniform(limits.payload_width_ratio);
    g.arm_length = w * uniform(limits.arm_length_ratio);
    g.arm_radius = w * uniform(limits.arm_radius_ratio);
    g.motor_radius = w * uniform(limits.motor_radius_ratio);
    g.rotor_radius = w * uniform(limits.rotor_radius_ratio);
    g = with_heights(g, limits.heights);

    const double rho_body = uniform(limits.density);
    const double rho_payload = uniform(limits.density);
    const double rho_arm = uniform(limits.density);
    const double rho_motor = uniform(limits.density);
    const double rho_rotor = uniform(limits.density);

    ComponentMasses m;
    m.body = rho_body * g.body_width * g.body_width * g.body_height;
    m.payload = rho_payload * g.payload_width * g.payload_width * g.payload_height;
    m.arm = rho_arm * kPi * g.arm_radius * g.arm_radius * g.arm_length;
    m.motor = rho_motor * kPi * g.motor_radius * g.motor_radius * g.motor_height;
    m.rotor = rho_rotor * kPi * g.rotor_radius * g.rotor_radius * g.rotor_height;

    const double settling = uniform(limits.settling_time);
    const double t2w = uniform(limits.thrust_to_weight);
    const double t2t = uniform(limits.torque_to_thrust);

    if (m.total() > limits.max_mass) continue;
    QuadParams out = assemble(g, m, t2w, t2t, settling);
    try {
      validate(out, dynamics_dt);
    } catch (const std::invalid_argument&) {
      continue;
    }
    return out;
  }
  throw std::runtime_error("sample_total: no valid draw after retries");
}

QuadParams sample_thrust_to_weight(const QuadParams& base,
                                   Range<double> thrust_to_weight, Rng& rng) {
  QuadParams out = base;
  out.thrust_to_weight =
      std::uniform_real_distribution<double>(thrust_to_weight.lo, thrust_to_weight.hi)(rng);
  out.f_max = 0.25 * kGravity * out.mass * out.thrust_to_weight;
  return out;
}

}  // namespace quadsim
