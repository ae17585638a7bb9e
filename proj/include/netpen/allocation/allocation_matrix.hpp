#pragma once

#include "netpen/core/types.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace netpen::allocation {

enum class MountOrientation { Horizontal, Vertical };

/// Placement of one thruster relative to the centre of gravity.
///
/// Horizontal thrusters push along (cos a, -sin a, 0) in the body frame;
/// vertical thrusters push along +z (down).
template <typename Scalar = double>
struct ThrusterMount {
  MountOrientation orientation{MountOrientation::Horizontal};
  Scalar alpha{0};
  Scalar lx{0};
  Scalar ly{0};
  Scalar lz{0};
};

template <typename Scalar = double>
using ThrusterGeometry = std::array<ThrusterMount<Scalar>, kNumThrusters>;

/// Wrench produced by one newton of thrust from `mount`.
template <typename Scalar>
Vector6<Scalar> thruster_column(const ThrusterMount<Scalar>& mount) {
  using std::cos;
  using std::sin;
  Vector6<Scalar> col;
  if (mount.orientation == MountOrientation::Vertical) {
    col << Scalar(0), Scalar(0), Scalar(1), mount.ly, -mount.lx, Scalar(0);
    return col;
  }
  const Scalar c = cos(mount.alpha);
  const Scalar s = sin(mount.alpha);
  col << c, -s, Scalar(0), s * mount.lz, c * mount.lz, -s * mount.lx - c * mount.ly;
  return col;
}

/// K such that tau = K * u for the six thruster forces u.
template <typename Scalar>
Matrix6<Scalar> build_allocation_matrix(const ThrusterGeometry<Scalar>& geometry) {
  Matrix6<Scalar> k;
  for (int i = 0; i < kNumThrusters; ++i) k.col(i) = thruster_column(geometry[static_cast<std::size_t>(i)]);
  return k;
}

/// Standard BlueROV2 layout: four vectored horizontal thrusters at +/-45 and
/// +/-135 degrees and two vertical thrusters on either side.
template <typename Scalar = double>
ThrusterGeometry<Scalar> standard_geometry() {
  constexpr double pi = std::numbers::pi;
  constexpr double r2 = std::numbers::sqrt2;
  const double lz = 0.051 * r2;
  const double front = 0.156;
  const double rear = -0.156;
  // Lateral arms chosen so the yaw moment arms are 0.167 (front) and 0.175 (rear).
  const double ly_front = 0.167 * r2 - front;
  const double ly_rear = 0.175 * r2 + rear;
  using M = ThrusterMount<Scalar>;
  const auto H = MountOrientation::Horizontal;
  const auto V = MountOrientation::Vertical;
  return {{
      M{H, Scalar(pi / 4), Scalar(front), Scalar(ly_front), Scalar(lz)},
      M{H, Scalar(-pi / 4), Scalar(front), Scalar(-ly_front), Scalar(lz)},
      M{H, Scalar(3 * pi / 4), Scalar(rear), Scalar(ly_rear), Scalar(lz)},
      M{H, Scalar(-3 * pi / 4), Scalar(rear), Scalar(-ly_rear), Scalar(lz)},
      M{V, Scalar(0), Scalar(-0.002), Scalar(0.111), Scalar(0)},
      M{V, Scalar(0), Scalar(0.002), Scalar(-0.111), Scalar(0)},
  }};
}

template <typename Scalar = double>
Matrix6<Scalar> standard_allocation_matrix() {
  return build_allocation_matrix(standard_geometry<Scalar>());
}

}  // namespace netpen::allocation
