#include "netpen/control/tracking.hpp"

#include <cmath>
#include <stdexcept>

namespace netpen::control {

TrackingLoop::TrackingLoop(const dynamics::VehicleModel<double>& model,
                           allocation::ThrusterLimitsd limits,
                           allocation::DegradationVectord degradation, PidGains gains,
                           dynamics::VehicleState<double> initial, Wrenchd disturbance)
    : model_(&model),
      limits_(std::move(limits)),
      degradation_(std::move(degradation)),
      gains_(std::move(gains)),
      state_(std::move(initial)),
      disturbance_(std::move(disturbance)) {
  limits_.validate();
  gains_.validate();
}

LoopStep TrackingLoop::advance(const Reference& ref, double dt) {
  LoopStep out;
  out.error = compute_error(ref, state_);
  const Vector4d rate = error_rate(ref, state_);
  out.desired = pid_step(gains_, out.error, rate, state_.eta(5), pid_, dt);
  const auto alloc = allocation::allocate_constrained(model_->allocation(), out.desired, degradation_, limits_);
  out.command = alloc.thrust;
  out.allocation_residual = alloc.residual;
  state_ = dynamics::step(*model_, state_, out.command, disturbance_, dt);
  return out;
}

RunLog track_trajectory(const std::vector<TimedReference>& trajectory,
                        const dynamics::VehicleModel<double>& model,
                        const allocation::ThrusterLimitsd& limits,
                        const allocation::DegradationVectord& degradation, const PidGains& gains,
                        const dynamics::VehicleState<double>& initial, double dt,
                        const Wrenchd& disturbance) {
  if (!(dt > 0.0)) throw std::invalid_argument("track_trajectory: dt must be positive");
  TrackingLoop loop(model, limits, degradation, gains, initial, disturbance);
  RunLog log;
  log.rows.reserve(trajectory.size());
  Vector4d sum = Vector4d::Zero();
  for (const auto& sample : trajectory) {
    const auto s = loop.advance(sample.ref, dt);
    const Vector4d abs_error = s.error.cwiseAbs();
    sum += abs_error;
    log.max_abs_error = log.max_abs_error.cwiseMax(abs_error);
    log.rows.push_back(RunLogRow{sample.t, loop.state(), s.command, s.error});
  }
  if (!trajectory.empty()) log.mean_abs_error = sum / static_cast<double>(trajectory.size());
  return log;
}

}  // namespace netpen::control
