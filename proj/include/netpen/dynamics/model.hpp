#pragma once

// Fossen-style 6-DOF model terms: mass, Coriolis/centripetal, damping,
// restoring forces and the Euler-angle kinematic transform.

#include "netpen/core/errors.hpp"
#include "netpen/core/types.hpp"
#include "netpen/dynamics/vehicle_params.hpp"

#include <Eigen/LU>

#include <cmath>
#include <numbers>
#include <type_traits>

namespace netpen::dynamics {

/// |theta| must stay below pi/2 - kGimbalMargin for T_theta to exist.
inline constexpr double kGimbalMargin = 1e-3;

/// H(r) = [I S(r)^T; 0 I], the CG-to-origin transform.
template <typename Scalar>
Matrix6<Scalar> origin_transform(const Vector3<Scalar>& r_bg) {
  Matrix6<Scalar> H = Matrix6<Scalar>::Identity();
  H.template block<3, 3>(0, 3) = skew(r_bg).transpose();
  return H;
}

template <typename Scalar>
Matrix6<Scalar> rigid_body_mass(const VehicleParams<Scalar>& p) {
  const Scalar mzg = p.mass * p.zg;
  Matrix6<Scalar> m = Matrix6<Scalar>::Zero();
  // Tabulated inertias are about the CG; shift roll/pitch to the origin
  // (parallel-axis term of I_o = I_g - m S(r_g)^2).
  const Scalar shift = p.mass * p.zg * p.zg;
  m.diagonal() << p.mass, p.mass, p.mass, p.Ix + shift, p.Iy + shift, p.Iz;
  // CG below the origin couples surge with pitch and sway with roll.
  m(0, 4) = m(4, 0) = mzg;
  m(1, 3) = m(3, 1) = -mzg;
  if (!p.r_bg.isZero(Scalar(0))) {
    const Matrix6<Scalar> H = origin_transform(p.r_bg);
    m = (H.transpose() * m * H).eval();
  }
  return m;
}

template <typename Scalar>
Matrix6<Scalar> added_mass(const VehicleParams<Scalar>& p) {
  Vector6<Scalar> a;
  a << p.Xdu, p.Ydv, p.Zdw, p.Kdp, p.Mdq, p.Ndr;
  return a.asDiagonal();
}

/// M = M_RB + M_A. Throws SingularMatrix when M cannot be inverted.
template <typename Scalar>
Matrix6<Scalar> mass_matrix(const VehicleParams<Scalar>& p) {
  Matrix6<Scalar> m = rigid_body_mass(p) + added_mass(p);
  Eigen::FullPivLU<Matrix6<Scalar>> lu(m);
  if (!lu.isInvertible()) throw SingularMatrix("mass matrix is singular");
  return m;
}

/// Coriolis-centripetal matrix induced by a symmetric inertia matrix:
/// C = [0, -S(M11 v1 + M12 v2); -S(M11 v1 + M12 v2), -S(M21 v1 + M22 v2)].
/// Skew-symmetric for every nu.
template <typename Scalar>
Matrix6<Scalar> coriolis_from_inertia(const Matrix6<Scalar>& m, const std::type_identity_t<Vector6<Scalar>>& nu) {
  const Vector3<Scalar> lin = m.template topRows<3>() * nu;
  const Vector3<Scalar> ang = m.template bottomRows<3>() * nu;
  Matrix6<Scalar> c = Matrix6<Scalar>::Zero();
  c.template block<3, 3>(0, 3) = -skew(lin);
  c.template block<3, 3>(3, 0) = -skew(lin);
  c.template block<3, 3>(3, 3) = -skew(ang);
  return c;
}

/// C(nu) = C_RB(nu) + C_A(nu).
template <typename Scalar>
Matrix6<Scalar> coriolis_matrix(const VehicleParams<Scalar>& p, const std::type_identity_t<Vector6<Scalar>>& nu) {
  return coriolis_from_inertia(rigid_body_mass(p), nu) + coriolis_from_inertia(added_mass(p), nu);
}

/// D(nu) = -diag(linear + quadratic*|nu|); entries are >= 0.
template <typename Scalar>
Matrix6<Scalar> damping_matrix(const VehicleParams<Scalar>& p, const std::type_identity_t<Vector6<Scalar>>& nu) {
  using std::abs;
  Vector6<Scalar> d;
  d << p.Xu + p.Xuu * abs(nu(0)), p.Yv + p.Yvv * abs(nu(1)), p.Zw + p.Zww * abs(nu(2)),
      p.Kp + p.Kpp * abs(nu(3)), p.Mq + p.Mqq * abs(nu(4)), p.Nr + p.Nrr * abs(nu(5));
  return (-d).asDiagonal();
}

/// g(eta) for a CG located z_g below the origin and buoyancy acting at it.
template <typename Scalar>
Vector6<Scalar> restoring_forces(const VehicleParams<Scalar>& p, const std::type_identity_t<Vector6<Scalar>>& eta) {
  using std::cos;
  using std::sin;
  const Scalar phi = eta(3);
  const Scalar theta = eta(4);
  const Scalar net = p.weight - p.buoyancy;
  const Scalar zw = p.zg * p.weight;
  Vector6<Scalar> g;
  g << net * sin(theta),
      -net * cos(theta) * sin(phi),
      -net * cos(theta) * cos(phi),
      zw * cos(theta) * sin(phi),
      zw * sin(theta),
      Scalar(0);
  return g;
}

/// Body-to-NED rotation R = Rz(psi) Ry(theta) Rx(phi).
template <typename Scalar>
Matrix3<Scalar> body_to_ned(Scalar phi, Scalar theta, Scalar psi) {
  using std::cos;
  using std::sin;
  const Scalar cf = cos(phi), sf = sin(phi);
  const Scalar ct = cos(theta), st = sin(theta);
  const Scalar cp = cos(psi), sp = sin(psi);
  Matrix3<Scalar> r;
  r << cp * ct, -sp * cf + cp * st * sf, sp * sf + cp * cf * st,
       sp * ct, cp * cf + sf * st * sp, -cp * sf + st * sp * cf,
       -st, ct * sf, ct * cf;
  return r;
}

/// Maps body angular rates to Euler-angle rates.
template <typename Scalar>
Matrix3<Scalar> euler_rate_transform(Scalar phi, Scalar theta) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::tan;
  if (abs(theta) >= Scalar(std::numbers::pi / 2 - kGimbalMargin)) {
    throw GimbalLock("pitch angle too close to +/-pi/2");
  }
  const Scalar cf = cos(phi), sf = sin(phi);
  const Scalar ct = cos(theta), tt = tan(theta);
  Matrix3<Scalar> t;
  t << Scalar(1), sf * tt, cf * tt,
       Scalar(0), cf, -sf,
       Scalar(0), sf / ct, cf / ct;
  return t;
}

/// J(eta) with eta_dot = J(eta) * nu. Throws GimbalLock near |theta| = pi/2.
template <typename Scalar>
Matrix6<Scalar> kinematic_transform(const Vector6<Scalar>& eta) {
  Matrix6<Scalar> j = Matrix6<Scalar>::Zero();
  j.template block<3, 3>(0, 0) = body_to_ned(eta(3), eta(4), eta(5));
  j.template block<3, 3>(3, 3) = euler_rate_transform(eta(3), eta(4));
  return j;
}

template <typename Scalar>
Scalar kinetic_energy(const Matrix6<Scalar>& m, const Vector6<Scalar>& nu) {
  return Scalar(0.5) * nu.dot(m * nu);
}

}  // namespace netpen::dynamics
