#pragma once

#include <variant>
#include <vector>

#include "quadsim/types.hpp"

namespace quadsim {

/// Solid box with full edge lengths along body x, y, z.
struct Box {
  Vec3 size;
};

/// Solid cylinder whose axis is body z.
struct Cylinder {
  double radius;
  double height;
};

/// Thin rod of the given length along a unit direction.
struct Rod {
  double length;
  Vec3 direction;
};

struct PointMass {};

using Shape = std::variant<Box, Cylinder, Rod, PointMass>;

struct Component {
  double mass;
  Shape shape;
  Vec3 offset;  // shape centroid in the body frame
};

/// Inertia of a shape about its own centroid, axes aligned with the body.
Mat3 own_inertia(const Shape& shape, double mass);

/// Center of mass of a set of components.
Vec3 center_of_mass(const std::vector<Component>& components);

/// Parallel-axis sum over all components.  The body origin must be the
/// composite center of mass; throws std::invalid_argument otherwise or if
/// any component mass is non-positive.
Mat3 compose_inertia(const std::vector<Component>& components,
                     double com_tolerance = 1e-9);

}  // namespace quadsim
