#pragma once

#include "netpen/allocation/allocator.hpp"
#include "netpen/control/pid.hpp"
#include "netpen/dynamics/vehicle_params.hpp"
#include "netpen/guidance/rrt_star.hpp"
#include "netpen/mission/plan.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/mission/world.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace netpen::sim {

/// One logged control step. Positions are world frame (z up).
struct TraceRow {
  double t{0.0};
  int action{-1};
  Vector3d position{Vector3d::Zero()};
  double yaw{0.0};
  Vector3d reference{Vector3d::Zero()};
  Vector6d thrust{Vector6d::Zero()};
  double battery{0.0};
  Vector4d error{Vector4d::Zero()};
};

struct ExecutorConfig {
  dynamics::VehicleParamsd vehicle{default_vehicle()};
  control::PidGains gains;
  allocation::ThrusterLimitsd limits;
  mission::BatteryModel battery;
  double dt{0.01};
  double cruise_speed{0.5};        // transit reference speed (m/s)
  double completion_radius{0.3};   // move_to done within this distance (m)
  double pause_error{1.0};         // reference time base holds above this error (m)
  double settle_timeout{60.0};     // extra time allowed after the reference ends (s)
  double battery_floor{5.0};       // runtime abort below this level (%)
  double clearance{0.5};           // transit planner cage clearance (m)
  double helix_turns{5.0};
  double helix_duration{150.0};
  guidance::RrtConfig rrt;
  std::uint64_t seed{1};
  int log_every{10};               // keep every n-th control step in the row log
  bool parallel{true};
  /// Called from the ROV's simulation thread for every logged row.
  std::function<void(const std::string& rov, const TraceRow& row)> on_row;

  void validate() const;
  /// BlueROV2 Heavy parameters with the CG 0.1 m below the CB.
  static dynamics::VehicleParamsd default_vehicle();
};

enum class ActionStatus { Completed, Aborted };

std::string_view to_string(ActionStatus status);

struct ActionOutcome {
  std::size_t index{0};
  mission::ActionKind kind{mission::ActionKind::MoveTo};
  std::string target;
  ActionStatus status{ActionStatus::Completed};
  std::string reason;  // set when aborted
  double t_start{0.0};
  double t_end{0.0};
  double battery_after{0.0};
  Vector4d mean_abs_error{Vector4d::Zero()};  // [x, y, z, yaw] over the action
};

struct RovTrace {
  std::string rov;
  std::vector<TraceRow> rows;
  std::vector<ActionOutcome> outcomes;  // in plan order; stops at the first abort
  std::vector<double> battery_trace;    // level after each executed action
  Vector4d mean_abs_error{Vector4d::Zero()};        // over every control step
  Vector4d inspection_mean_abs_error{Vector4d::Zero()};  // over helix steps only
  Vector6d max_abs_thrust{Vector6d::Zero()};        // over every control step
  std::size_t planned_actions{0};
  double duration{0.0};

  bool completed() const;
  const ActionOutcome* aborted() const;
};

struct ExecutionTrace {
  std::vector<RovTrace> rovs;

  bool completed() const;
  const RovTrace* find(std::string_view rov) const;
};

/// Runs each ROV's actions in order on a simulated vehicle: move_to follows
/// an RRT* path with PID tracking, inspect_net flies the helix about the
/// cage from the current offset point. Battery is charged per the battery
/// model when each action completes (docks recharge when the next action
/// starts). Runtime guards record an abort instead of throwing: battery below
/// the floor after a charge-spending action, an inspection the remaining
/// thrusters cannot control, no transit path, or a timeout. ROVs run
/// concurrently and do not interact.
ExecutionTrace execute_plan(const mission::MissionPlan& plan, const mission::WorldModel& world,
                            const ExecutorConfig& config = {});

/// t, action, x, y, z, yaw, ref_x, ref_y, ref_z, T1..T6, battery, ex, ey, ez, eyaw.
void write_trace_csv(const RovTrace& trace, std::ostream& out);
/// One "<rov>.csv" per ROV plus "outcomes.csv"; returns the files written.
std::vector<std::filesystem::path> write_trace_csvs(const ExecutionTrace& trace, const std::filesystem::path& dir);

/// Multi-line human summary: per ROV status, duration, final battery, errors.
std::string format_summary(const ExecutionTrace& trace);

}  // namespace netpen::sim
