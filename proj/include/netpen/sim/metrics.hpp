#pragma once

#include "netpen/planning/planners.hpp"
#include "netpen/sim/executor.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace netpen::sim {

/// Planning and execution success over repeated planner runs.
struct PlannerMetrics {
  std::string label;
  int runs{0};
  int valid_plans{0};
  int completed_executions{0};
  double psr{0.0};          // % valid plans
  double exesr{0.0};        // % runs whose plan was valid and executed without abort
  double mean_seconds{0.0};  // mean plan generation time
};

struct FaultCondition {
  std::string name;
  std::vector<int> failed;  // 1-based thruster ids
};

/// Normal, F2, F2,5, F2,4,5.
std::vector<FaultCondition> standard_fault_conditions();

struct FaultRow {
  std::string condition;
  std::vector<int> failed;
  Vector4d mean_abs_error{Vector4d::Zero()};  // x, y, z (m), yaw (rad)
  Vector4d max_abs_error{Vector4d::Zero()};
  Vector6d max_abs_thrust{Vector6d::Zero()};
};

struct MetricsReport {
  std::vector<PlannerMetrics> planners;
  std::vector<FaultRow> faults;

  std::string format() const;
  nlohmann::json to_json() const;
};

enum class TimeBasis {
  Backend,  // time inside backend calls (scripted operators)
  Wall,     // includes human think-time (interactive operators)
};

/// Runs `plan_once(run)` n times. Valid plans are executed in `world`; a run
/// counts toward EXESR only when its plan is valid and every ROV completes.
/// Invalid plans count as execution failures. Identical plans are simulated
/// once (execution is deterministic).
PlannerMetrics compute_metrics(const std::function<planning::PlanningResult(int run)>& plan_once,
                               const mission::WorldModel& world, int n, const ExecutorConfig& executor = {},
                               std::string label = {}, TimeBasis basis = TimeBasis::Backend);

/// Closed-loop standard helix (3 m radius, 0 to -5 m, 5 turns, 150 s) per
/// condition; average and peak absolute tracking error per DOF.
std::vector<FaultRow> fault_condition_study(const std::vector<FaultCondition>& conditions = standard_fault_conditions(),
                                            const ExecutorConfig& config = {});

}  // namespace netpen::sim
