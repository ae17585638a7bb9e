#pragma once

#include "netpen/mission/world.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netpen::planning {

/// What a user instruction asks for, resolved against a world.
struct TaskSpec {
  /// Cages pinned to a ROV, in the order given.
  std::map<std::string, std::vector<std::string>> fixed;
  /// Cages any eligible ROV may take.
  std::vector<std::string> pool;
  /// ROVs allowed to take pool cages.
  std::vector<std::string> pool_rovs;
  /// "under 50% battery" style cap on each ROV's usable start charge.
  std::optional<double> battery_cap;

  std::vector<std::string> requested() const;
};

/// Small keyword grammar covering instructions such as
///   "Inspect all fish nets"
///   "Assign ROV1 to inspect Cage1, Cage3 and ROV2 to inspect Cage2, Cage4, Cage5"
///   "ROV1 to inspect cages 1--3 and dock, ROV2 to inspect remaining"
///   "Plan efficient inspection under 50% battery constraint for each ROV"
/// Cage numbers refer to ids "cage_<n>" or the n-th cage of the world.
TaskSpec parse_instruction(std::string_view instruction, const mission::WorldModel& world);

}  // namespace netpen::planning
