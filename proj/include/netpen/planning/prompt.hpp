#pragma once

#include "netpen/core/types.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/mission/world.hpp"

#include <string>
#include <string_view>

namespace netpen::planning {

struct PromptParts {
  std::string system;  // environment, constraints, functions, output format
  std::string user;    // "User Instruction" section
};

/// Renders the planner prompt from live world data, battery model and
/// allocation matrix.
PromptParts build_prompt_parts(const mission::WorldModel& world, std::string_view instruction,
                               const Matrix6d& allocation, const mission::BatteryModel& battery = {},
                               double inspection_distance = 3.0);

std::string build_prompt(const mission::WorldModel& world, std::string_view instruction, const Matrix6d& allocation,
                         const mission::BatteryModel& battery = {}, double inspection_distance = 3.0);

/// "Thruster #1 faulty", "Thrusters #1, #2 faulty", "All thrusters functional".
std::string describe_thrusters(const mission::RovStatus& rov);

/// "Cage 1" for "cage_1", "Docking Station 2" for "docking_station_2": underscores become
/// spaces and words are capitalised.
std::string display_name(std::string_view id);

}  // namespace netpen::planning
