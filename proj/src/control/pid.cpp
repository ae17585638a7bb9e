#include "netpen/control/pid.hpp"

#include "netpen/dynamics/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netpen::control {

void PidGains::validate() const {
  if ((kp.array() <= 0.0).any()) throw std::invalid_argument("PID: K_p must be positive");
  if ((ki.array() < 0.0).any() || (kd.array() < 0.0).any())
    throw std::invalid_argument("PID: K_i and K_d must be non-negative");
  if ((integral_clamp.array() < 0.0).any()) throw std::invalid_argument("PID: clamp must be >= 0");
  if ((integral_zone.array() <= 0.0).any()) throw std::invalid_argument("PID: integral zone must be > 0");
}

TrackingError compute_error(const Vector4d& desired, const dynamics::VehicleState<double>& state) {
  TrackingError e;
  e.head<3>() = desired.head<3>() - state.eta.head<3>();
  e(3) = wrap_angle(desired(3) - state.eta(5));
  return e;
}

TrackingError compute_error(const Reference& ref, const dynamics::VehicleState<double>& state) {
  Vector4d d;
  d << ref.position, ref.yaw;
  return compute_error(d, state);
}

Vector4d error_rate(const Reference& ref, const dynamics::VehicleState<double>& state) {
  const Vector6d eta_dot = dynamics::kinematic_transform(state.eta) * state.nu;
  Vector4d r;
  r.head<3>() = ref.velocity - eta_dot.head<3>();
  r(3) = ref.yaw_rate - eta_dot(5);
  return r;
}

Wrenchd pid_step(const PidGains& gains, const TrackingError& error, const Vector4d& rate,
                 double yaw, PidState& state, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("pid_step: dt must be positive");
  Vector4d command;
  for (int i = 0; i < 4; ++i) {
    if (gains.ki(i) > 0.0 && std::abs(error(i)) <= gains.integral_zone(i)) {
      const double limit = gains.integral_clamp(i) / gains.ki(i);
      state.integral(i) = std::clamp(state.integral(i) + error(i) * dt, -limit, limit);
    }
    command(i) = gains.kp(i) * error(i) + gains.ki(i) * state.integral(i) + gains.kd(i) * rate(i);
  }
  state.previous_error = error;
  state.has_previous = true;

  const double c = std::cos(yaw), s = std::sin(yaw);
  Wrenchd tau = Wrenchd::Zero();
  tau(0) = c * command(0) + s * command(1);
  tau(1) = -s * command(0) + c * command(1);
  tau(2) = command(2);
  tau(5) = command(3);
  return tau;
}

Wrenchd pid_step(const PidGains& gains, const TrackingError& error, double yaw, PidState& state,
                 double dt) {
  Vector4d rate = Vector4d::Zero();
  if (state.has_previous) {
    rate = (error - state.previous_error) / dt;
    rate(3) = wrap_angle(error(3) - state.previous_error(3)) / dt;
  }
  return pid_step(gains, error, rate, yaw, state, dt);
}

}  // namespace netpen::control
