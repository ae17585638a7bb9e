#include "netpen/planning/prompt.hpp"

#include <fmt/format.h>

#include <cctype>

namespace netpen::planning {

namespace {

std::string num(double v) { return fmt::format("{}", v); }

}  // namespace

std::string display_name(std::string_view id) {
  std::string out;
  bool capital = true;
  for (char c : id) {
    if (c == '_') {
      out += ' ';
      capital = true;
    } else {
      out += capital ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
      capital = false;
    }
  }
  return out;
}

std::string describe_thrusters(const mission::RovStatus& rov) {
  std::vector<std::string> failed;
  std::vector<std::string> degraded;
  for (int i = 0; i < kNumThrusters; ++i) {
    const double d = rov.degradation[i];
    if (d == 0.0)
      failed.push_back(fmt::format("#{}", i + 1));
    else if (d < 1.0)
      degraded.push_back(fmt::format("#{} at {}%", i + 1, num(d * 100.0)));
  }
  std::vector<std::string> parts;
  if (!failed.empty())
    parts.push_back(fmt::format("{} {} faulty", failed.size() == 1 ? "Thruster" : "Thrusters", fmt::join(failed, ", ")));
  if (!degraded.empty())
    parts.push_back(
        fmt::format("{} {} capacity", degraded.size() == 1 ? "Thruster" : "Thrusters", fmt::join(degraded, ", ")));
  if (parts.empty()) return "All thrusters functional";
  return fmt::format("{}", fmt::join(parts, "; "));
}

PromptParts build_prompt_parts(const mission::WorldModel& world, std::string_view instruction,
                               const Matrix6d& allocation, const mission::BatteryModel& battery,
                               double inspection_distance) {
  std::string s;
  s += "You are an AI-central planner tasked with coordinating multiple Remotely Operated Vehicles (ROVs) for "
       "inspecting multiple cylindrical aquaculture net pens in an underwater environment. The number of ROVs, "
       "cages, and docking stations is provided by the environment status.Your objective is to create efficient, "
       "and feasible inspection plans for each ROV while strictly follow the constraints.\n\n";

  s += "Environment Status\n\n";
  s += "Net Cage Information\n";
  const guidance::CageCylinder shape = world.cages.empty() ? guidance::CageCylinder{} : world.cages.front();
  s += fmt::format("- Shape: Cylindrical, Diameter: {} meters, Depth range: {} meters (surface) to {} meters\n\n",
                   num(2.0 * shape.radius), num(shape.z_top), num(shape.z_bottom));

  s += "Net Cage Positions\n";
  std::vector<std::string> cages;
  for (const auto& c : world.cages)
    cages.push_back(fmt::format("{}: ({}, {})", display_name(c.id), num(c.center.x()), num(c.center.y())));
  s += fmt::format("{}\n\n", fmt::join(cages, ", "));

  s += "Docking Stations\n";
  std::vector<std::string> stations;
  for (const auto& st : world.stations)
    stations.push_back(fmt::format("{}: ({}, {})", display_name(st.id), num(st.position.x()), num(st.position.y())));
  s += fmt::format("{}\n\n", fmt::join(stations, ", "));

  for (const auto& r : world.rovs) {
    s += fmt::format("- {}\n", r.id);
    s += fmt::format("  - Initial Position: ({}, {}, {})\n", num(r.position.x()), num(r.position.y()),
                     num(r.position.z()));
    s += fmt::format("  - Battery Level: {}%\n", num(r.battery));
    s += fmt::format("  - Thruster Status: {}\n", describe_thrusters(r));
  }
  if (!world.rovs.empty()) s += "\n";

  s += "Thruster Configuration Matrix\n";
  for (int i = 0; i < 6; ++i) {
    std::vector<std::string> row;
    for (int j = 0; j < 6; ++j) row.push_back(fmt::format("{:6.3f}", allocation(i, j)));
    s += fmt::format("[{}]\n", fmt::join(row, ", "));
  }
  s += "\n";

  const std::string d = num(inspection_distance);
  s += "Constraints & Rules (STRICTLY FOLLOW)\n";
  s += fmt::format(
      "- Inspection Distance: ROVs must maintain EXACTLY a {}-meter separation from the cage center during "
      "inspections to prevent collisions. Only two possible options add {} in x-axis or subtract {} in y-axis. You "
      "should decide which minimizes distance.\n",
      d, d, d);
  s += "- Battery:\n";
  s += fmt::format("  - Each cage inspection consumes approximately {}% battery.\n", num(battery.inspection_cost));
  s += fmt::format(
      "  - An ROV must dock BEFORE reaching a critical battery level (below {}%) to ensure sufficient battery for go "
      "docking.\n",
      num(battery.critical_level));
  s += fmt::format("  - If a cage inspection will cause the battery to be below {}%, ROV must dock instead\n",
                   num(battery.critical_level));
  if (battery.move_cost_per_meter > 0.0)
    s += fmt::format("  - Travel consumes {}% battery per meter.\n", num(battery.move_cost_per_meter));
  s += "- Thruster:\n";
  s += "  - Evaluate thruster faults to determine if the ROV can safely complete inspections.\n";
  s += "  - we consider the motion ONLY in surge, sway, heave and yaw\n";
  s += "  - If deemed insufficient thrust control exists, instruct the ROV to dock immediately for repairs.\n";
  s += "  - If The working thrusters can generate motion in surge, sway, heave and yaw, you can use ROV for "
       "inspection.\n";
  s += "- Docking:\n";
  s += "  - All ROVs must dock at the nearest docking station upon completion of their assigned tasks. Each ROV "
       "should dock at different stations unless number of ROVs more than the number of docking stations\n";
  s += "  - If User task is not completed, ROVs can dock and then complete the task\n";
  s += "- Inspection Direction:\n";
  s += "  - ROVs do not have to inspect the same number of cages; assign cages based on proximity to minimize total "
       "distance.\n";
  s += fmt::format(
      "  - Alternate vertical inspection direction to minimize vertical movements, for example: top-to-bottom ({} m "
      "to {} m) for the first cage, then bottom-to-top ({} m to {} m) for the next, and so on.\n\n",
      num(shape.z_top), num(shape.z_bottom), num(shape.z_bottom), num(shape.z_top));

  s += "Functions Available\n";
  s += "move_to(target, {'x': value, 'y': value, 'z': value})\n";
  s += fmt::format(
      "inspect_net(target, {{'direction': 'top-to-bottom'/'bottom-to-top', 'method': 'standard', 'distance': {}}})\n",
      d);
  s += "* Distance is measured from ROV position and center of the cage\n\n";

  std::vector<std::string> keys;
  for (const auto& r : world.rovs) keys.push_back(r.id);
  std::string key_list;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i > 0) key_list += i + 1 == keys.size() ? " and " : ", ";
    key_list += keys[i];
  }
  s += "Output Format\n\n";
  s += fmt::format(
      "Understand the spatial relation between different objects in the environment. Provide the plan in JSON "
      "format and do not include any additional explanation inside or outside the JSON. The format consists of main "
      "keys: {}. Each key must include:\n",
      key_list);
  s += "- Plan: A sequential list of actions using the available functions above.\n";
  s += "- BatteryStatus: Estimated remaining battery percentage after plan execution.\n";
  s += "- ThrusterStatus: Summary of thruster functionality (e.g., \"Faulty Thrusters: 1, 2, 4\", \"All Thrusters "
       "Functional\").\n";

  std::string instr(instruction);
  while (!instr.empty() && std::isspace(static_cast<unsigned char>(instr.back()))) instr.pop_back();
  if (!instr.empty() && instr.back() != '.' && instr.back() != '!' && instr.back() != '?') instr += '.';
  std::string user = "User Instruction\n\n";
  user += instr.empty() ? "Generate the inspection plan now.\n" : instr + " Generate the inspection plan now.\n";
  return {s, user};
}

std::string build_prompt(const mission::WorldModel& world, std::string_view instruction, const Matrix6d& allocation,
                         const mission::BatteryModel& battery, double inspection_distance) {
  const auto parts = build_prompt_parts(world, instruction, allocation, battery, inspection_distance);
  return parts.system + "\n" + parts.user;
}

}  // namespace netpen::planning
