#pragma once

#include "netpen/core/types.hpp"
#include "netpen/dynamics/simulator.hpp"

namespace netpen::control {

/// Per-DOF gains ordered [x, y, z, yaw].
struct PidGains {
  Vector4d kp{95.0, 95.0, 100.0, 12.0};
  Vector4d ki{2.0, 2.0, 3.0, 0.3};
  Vector4d kd{60.0, 60.0, 60.0, 4.0};
  // Bound on |K_i * integral| per DOF, in wrench units.
  Vector4d integral_clamp{Vector4d::Constant(10.0)};
  // The integral only accumulates while |e| is inside this band (m, m, m, rad).
  Vector4d integral_zone{0.5, 0.5, 0.5, 0.3};

  void validate() const;
};

/// Four-DOF reference in the simulation (NED) frame.
struct Reference {
  Vector3d position{Vector3d::Zero()};
  double yaw{0.0};
  Vector3d velocity{Vector3d::Zero()};
  double yaw_rate{0.0};
};

/// e = [x_d - x, y_d - y, z_d - z, wrap(psi_d - psi)].
using TrackingError = Vector4d;

TrackingError compute_error(const Vector4d& desired, const dynamics::VehicleState<double>& state);
TrackingError compute_error(const Reference& ref, const dynamics::VehicleState<double>& state);

/// de/dt from reference rates and the measured (world-frame) rates.
Vector4d error_rate(const Reference& ref, const dynamics::VehicleState<double>& state);

struct PidState {
  Vector4d integral{Vector4d::Zero()};
  Vector4d previous_error{Vector4d::Zero()};
  bool has_previous{false};
};

/// One controller update. Position terms are formed in the world frame and
/// rotated into the body by the current yaw; roll and pitch rows are zero.
Wrenchd pid_step(const PidGains& gains, const TrackingError& error, const Vector4d& error_rate,
                 double yaw, PidState& state, double dt);

/// Variant that differentiates the error by backward difference.
Wrenchd pid_step(const PidGains& gains, const TrackingError& error, double yaw, PidState& state,
                 double dt);

}  // namespace netpen::control
