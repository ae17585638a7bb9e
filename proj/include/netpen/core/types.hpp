#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace netpen {

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Vector6 = Eigen::Matrix<Scalar, 6, 1>;
template <typename Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Matrix6 = Eigen::Matrix<Scalar, 6, 6>;

/// Body-frame generalized force [X, Y, Z, K, M, N].
template <typename Scalar>
using Wrench = Vector6<Scalar>;

using Vector2d = Eigen::Vector2d;
using Vector3d = Vector3<double>;
using Vector4d = Vector4<double>;
using Vector6d = Vector6<double>;
using Matrix3d = Matrix3<double>;
using Matrix6d = Matrix6<double>;
using Wrenchd = Wrench<double>;

inline constexpr int kNumThrusters = 6;

/// Wraps an angle to (-pi, pi].
template <typename Scalar>
Scalar wrap_angle(Scalar angle) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::fmod(angle + pi, Scalar(2) * pi);
  if (wrapped <= Scalar(0)) wrapped += Scalar(2) * pi;
  return wrapped - pi;
}

/// Skew-symmetric cross-product matrix: skew(a) * b == a.cross(b).
template <typename Derived>
Matrix3<typename Derived::Scalar> skew(const Eigen::MatrixBase<Derived>& a) {
  using S = typename Derived::Scalar;
  Matrix3<S> m;
  m << S(0), -a(2), a(1),
       a(2), S(0), -a(0),
      -a(1), a(0), S(0);
  return m;
}

}  // namespace netpen
