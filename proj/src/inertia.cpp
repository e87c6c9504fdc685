#include "quadsim/inertia.hpp"

#include <stdexcept>
#include <string>

namespace quadsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Mat3 own_inertia(const Shape& shape, double mass) {
  return std::visit(
      Overloaded{
          [mass](const Box& b) -> Mat3 {
            const Vec3 s2 = b.size.cwiseAbs2();
            return (mass / 12.0) *
                   Vec3(s2.y() + s2.z(), s2.x() + s2.z(), s2.x() + s2.y())
                       .asDiagonal()
                       .toDenseMatrix();
          },
          [mass](const Cylinder& c) -> Mat3 {
            const double r2 = c.radius * c.radius;
            const double side = mass * (3.0 * r2 + c.height * c.height) / 12.0;
            return Vec3(side, side, 0.5 * mass * r2).asDiagonal().toDenseMatrix();
          },
          [mass](const Rod& r) -> Mat3 {
            const Vec3 u = r.direction.normalized();
            return (mass * r.length * r.length / 12.0) *
                   (Mat3::Identity() - u * u.transpose());
          },
          [](const PointMass&) -> Mat3 { return Mat3::Zero(); },
      },
      shape);
}

Vec3 center_of_mass(const std::vector<Component>& components) {
  double total = 0.0;
  Vec3 moment = Vec3::Zero();
  for (const auto& c : components) {
    total += c.mass;
    moment += c.mass * c.offset;
  }
  if (total <= 0.0) throw std::invalid_argument("center_of_mass: zero total mass");
  return moment / total;
}

Mat3 compose_inertia(const std::vector<Component>& components,
                     double com_tolerance) {
  if (components.empty()) throw std::invalid_argument("compose_inertia: no components");
  for (const auto& c : components) {
    if (!(c.mass > 0.0)) {
      throw std::invalid_argument("compose_inertia: component mass must be positive");
    }
  }
  const Vec3 com = center_of_mass(components);
  if (com.norm() > com_tolerance) {
    throw std::invalid_argument("compose_inertia: center of mass " +
                                std::to_string(com.norm()) +
                                " m away from body origin");
  }
  Mat3 inertia = Mat3::Zero();
  for (const auto& c : components) {
    const Vec3& d = c.offset;
    inertia += own_inertia(c.shape, c.mass) +
               c.mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
  }
  return inertia;
}

}  // namespace quadsim
