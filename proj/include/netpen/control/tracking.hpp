#pragma once

#include "netpen/allocation/allocator.hpp"
#include "netpen/control/pid.hpp"
#include "netpen/dynamics/simulator.hpp"

#include <vector>

namespace netpen::control {

struct LoopStep {
  TrackingError error{TrackingError::Zero()};
  Wrenchd desired{Wrenchd::Zero()};
  Vector6d command{Vector6d::Zero()};
  double allocation_residual{0.0};
};

/// PID -> constrained allocation -> vehicle step, for one vehicle.
class TrackingLoop {
 public:
  TrackingLoop(const dynamics::VehicleModel<double>& model, allocation::ThrusterLimitsd limits,
               allocation::DegradationVectord degradation, PidGains gains,
               dynamics::VehicleState<double> initial, Wrenchd disturbance = Wrenchd::Zero());

  LoopStep advance(const Reference& ref, double dt);

  const dynamics::VehicleState<double>& state() const { return state_; }
  dynamics::VehicleState<double>& state() { return state_; }
  const PidState& pid_state() const { return pid_; }
  const allocation::DegradationVectord& degradation() const { return degradation_; }
  void reset_integral() { pid_ = PidState{}; }

 private:
  const dynamics::VehicleModel<double>* model_;
  allocation::ThrusterLimitsd limits_;
  allocation::DegradationVectord degradation_;
  PidGains gains_;
  PidState pid_;
  dynamics::VehicleState<double> state_;
  Wrenchd disturbance_;
};

struct TimedReference {
  double t{0.0};
  Reference ref;
};

struct RunLogRow {
  double t{0.0};
  dynamics::VehicleState<double> state;
  Vector6d command{Vector6d::Zero()};
  TrackingError error{TrackingError::Zero()};
};

struct RunLog {
  std::vector<RunLogRow> rows;
  Vector4d mean_abs_error{Vector4d::Zero()};  // [x, y, z, yaw]
  Vector4d max_abs_error{Vector4d::Zero()};
};

/// Closed-loop run along the given references, one controller step per
/// reference (the reference spacing must equal dt). Errors are averaged over
/// every step.
RunLog track_trajectory(const std::vector<TimedReference>& trajectory,
                        const dynamics::VehicleModel<double>& model,
                        const allocation::ThrusterLimitsd& limits,
                        const allocation::DegradationVectord& degradation, const PidGains& gains,
                        const dynamics::VehicleState<double>& initial, double dt,
                        const Wrenchd& disturbance = Wrenchd::Zero());

}  // namespace netpen::control
