#pragma once

#include "netpen/guidance/helix.hpp"
#include "netpen/mission/plan.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/mission/world.hpp"
#include "netpen/planning/instruction.hpp"

namespace netpen::planning {

struct GreedyOptions {
  /// Dock and recharge mid-mission when no remaining cage fits the battery.
  bool insert_recharge{true};
  /// Keep ROVs that fail the controllability check away from inspections.
  bool gate_thrusters{true};
  guidance::OffsetRule offsets{guidance::OffsetRule::TwoOption};
  double clearance{0.5};
};

/// Nearest-pair greedy assignment:
///  1. pinned cages in the order given;
///  2. repeatedly the globally nearest (ROV, cage) pair whose inspection keeps the
///     battery at or above the critical level;
///  3. when none fits, the eligible ROV with the most charge docks at its nearest
///     station and recharges (insert_recharge), or the nearest pair is taken
///     regardless (naive mode);
///  4. every ROV finishes at a station, distinct while stations last.
/// Inspection directions alternate per ROV. With both options on, the result
/// passes validate_plan for any world whose cages and stations are separated.
mission::MissionPlan greedy_plan(const mission::WorldModel& world, const TaskSpec& spec,
                                 const mission::BatteryModel& battery = {}, const GreedyOptions& options = {});

}  // namespace netpen::planning
