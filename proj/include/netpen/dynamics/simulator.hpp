#pragma once

#include "netpen/core/errors.hpp"
#include "netpen/core/types.hpp"
#include "netpen/dynamics/model.hpp"
#include "netpen/dynamics/vehicle_params.hpp"

#include <algorithm>
#include <stdexcept>
#include <type_traits>

namespace netpen::dynamics {

inline constexpr double kMaxStep = 0.1;

template <typename Scalar = double>
struct VehicleState {
  Vector6<Scalar> eta{Vector6<Scalar>::Zero()};  // [x y z phi theta psi], NED
  Vector6<Scalar> nu{Vector6<Scalar>::Zero()};   // [u v w p q r], body
  Vector6<Scalar> thrust{Vector6<Scalar>::Zero()};  // actual thruster forces (N)
  Scalar battery{Scalar(100)};                       // percent

  Vector3<Scalar> position() const { return eta.template head<3>(); }
  Scalar yaw() const { return eta(5); }
};

/// First-order thruster response: tau_i * dT_i/dt + T_i = T_i,cmd.
template <typename Scalar = double>
struct ThrusterLag {
  Vector6<Scalar> time_constants{Vector6<Scalar>::Constant(Scalar(0.2))};

  void validate() const {
    if ((time_constants.array() <= Scalar(0)).any()) {
      throw std::invalid_argument("ThrusterLag: time constants must be positive");
    }
  }
};

/// Immutable vehicle description used by the integrator. Caches M^-1.
template <typename Scalar = double>
class VehicleModel {
 public:
  VehicleModel(VehicleParams<Scalar> params, Matrix6<Scalar> allocation,
               ThrusterLag<Scalar> lag = {})
      : params_(std::move(params)), allocation_(std::move(allocation)), lag_(std::move(lag)) {
    params_.validate();
    lag_.validate();
    mass_ = mass_matrix(params_);
    mass_inverse_ = mass_.inverse();
  }

  const VehicleParams<Scalar>& params() const { return params_; }
  const Matrix6<Scalar>& allocation() const { return allocation_; }
  const ThrusterLag<Scalar>& lag() const { return lag_; }
  const Matrix6<Scalar>& mass() const { return mass_; }
  const Matrix6<Scalar>& mass_inverse() const { return mass_inverse_; }

  /// nu_dot for the given pose, velocity and total applied wrench.
  Vector6<Scalar> acceleration(const Vector6<Scalar>& eta, const Vector6<Scalar>& nu,
                               const Wrench<Scalar>& applied) const {
    const Vector6<Scalar> rhs = applied - coriolis_matrix(params_, nu) * nu -
                                damping_matrix(params_, nu) * nu - restoring_forces(params_, eta);
    return mass_inverse_ * rhs;
  }

 private:
  VehicleParams<Scalar> params_;
  Matrix6<Scalar> allocation_;
  ThrusterLag<Scalar> lag_;
  Matrix6<Scalar> mass_;
  Matrix6<Scalar> mass_inverse_;
};

namespace detail {

template <typename Scalar>
struct Derivative {
  Vector6<Scalar> eta;
  Vector6<Scalar> nu;
  Vector6<Scalar> thrust;
};

template <typename Scalar>
Derivative<Scalar> derivative(const VehicleModel<Scalar>& model, const Vector6<Scalar>& eta,
                              const Vector6<Scalar>& nu, const Vector6<Scalar>& thrust,
                              const Vector6<Scalar>& commanded,
                              const Wrench<Scalar>& disturbance) {
  Derivative<Scalar> d;
  d.thrust = (commanded - thrust).cwiseQuotient(model.lag().time_constants);
  d.nu = model.acceleration(eta, nu, model.allocation() * thrust + disturbance);
  d.eta = kinematic_transform(eta) * nu;
  return d;
}

}  // namespace detail

/// Advances the vehicle by one fixed RK4 step of length dt.
///
/// The thruster states, body velocity and pose are integrated together; the
/// Euler angles are wrapped to (-pi, pi] afterwards. The battery field is
/// carried through untouched.
template <typename Scalar>
VehicleState<Scalar> step(const VehicleModel<Scalar>& model, const VehicleState<Scalar>& state,
                          const std::type_identity_t<Vector6<Scalar>>& commanded,
                          const std::type_identity_t<Wrench<Scalar>>& disturbance,
                          std::type_identity_t<Scalar> dt) {
  if (!(dt > Scalar(0) && dt <= Scalar(kMaxStep))) {
    throw std::invalid_argument("step: dt must lie in (0, 0.1]");
  }
  if (!commanded.allFinite()) throw std::invalid_argument("step: commanded thrust not finite");

  const auto& e0 = state.eta;
  const auto& n0 = state.nu;
  const auto& t0 = state.thrust;
  const Scalar h = dt;
  const Scalar half = dt / Scalar(2);

  const auto k1 = detail::derivative(model, e0, n0, t0, commanded, disturbance);
  const auto k2 = detail::derivative<Scalar>(model, e0 + half * k1.eta, n0 + half * k1.nu,
                                             t0 + half * k1.thrust, commanded, disturbance);
  const auto k3 = detail::derivative<Scalar>(model, e0 + half * k2.eta, n0 + half * k2.nu,
                                             t0 + half * k2.thrust, commanded, disturbance);
  const auto k4 = detail::derivative<Scalar>(model, e0 + h * k3.eta, n0 + h * k3.nu,
                                             t0 + h * k3.thrust, commanded, disturbance);

  const Scalar w = h / Scalar(6);
  VehicleState<Scalar> next = state;
  next.eta = e0 + w * (k1.eta + 2 * k2.eta + 2 * k3.eta + k4.eta);
  next.nu = n0 + w * (k1.nu + 2 * k2.nu + 2 * k3.nu + k4.nu);
  next.thrust = t0 + w * (k1.thrust + 2 * k2.thrust + 2 * k3.thrust + k4.thrust);

  if (!next.eta.allFinite() || !next.nu.allFinite() || !next.thrust.allFinite()) {
    throw NonFiniteState("integration produced a non-finite state");
  }
  for (int i = 3; i < 6; ++i) next.eta(i) = wrap_angle(next.eta(i));
  next.battery = std::clamp(state.battery, Scalar(0), Scalar(100));
  return next;
}

}  // namespace netpen::dynamics
