#pragma once

#include "netpen/core/types.hpp"
#include "netpen/guidance/helix.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netpen::mission {

enum class ActionKind { MoveTo, InspectNet };

std::string_view to_string(ActionKind kind);

struct PlanAction {
  ActionKind kind{ActionKind::MoveTo};
  std::string target;
  Vector3d position{Vector3d::Zero()};  // move_to only, world frame
  guidance::Direction direction{guidance::Direction::TopToBottom};
  std::string method{"standard"};
  double distance{3.0};

  static PlanAction move_to(std::string target, const Vector3d& position);
  static PlanAction inspect_net(std::string target, guidance::Direction direction, double distance = 3.0);

  bool operator==(const PlanAction&) const = default;
};

struct RovPlan {
  std::string rov_id;
  std::vector<PlanAction> actions;
  std::string battery_status;   // e.g. "15%"
  std::string thruster_status;  // e.g. "Faulty Thrusters: 1"

  /// Numeric value of battery_status, if it reads as "<number>%" or "<number>".
  std::optional<double> declared_battery() const;

  bool operator==(const RovPlan&) const = default;
};

struct MissionPlan {
  std::vector<RovPlan> rovs;

  const RovPlan* find(std::string_view rov_id) const;
  RovPlan* find(std::string_view rov_id);

  bool operator==(const MissionPlan&) const = default;
};

/// Parses one call of the closed grammar, e.g.
///   move_to('cage_1', {'x': 3.0, 'y': 0.0, 'z': 0.0})
///   inspect_net('cage_1', {'direction':'top-to-bottom', 'method':'standard', 'distance':3})
/// Throws SchemaError(location, ...) on any deviation.
PlanAction parse_action(std::string_view text, const std::string& location = {});
std::string format_action(const PlanAction& action);

/// Parses the per-ROV JSON document ({"ROV1": {"Plan": [...], "BatteryStatus": ..,
/// "ThrusterStatus": ..}, ...}). Unknown keys, unknown actions and missing keys are
/// SchemaErrors.
MissionPlan parse_plan(std::string_view json_text);
std::string serialize_plan(const MissionPlan& plan);

/// "15%" style text for a battery level.
std::string format_battery_status(double battery);
/// "Faulty Thrusters: 1, 2" or "All Thrusters Functional".
std::string format_thruster_status(const std::vector<int>& failed);
/// Inverse of format_thruster_status; nullopt for unrecognized text.
std::optional<std::vector<int>> parse_thruster_status(std::string_view text);

}  // namespace netpen::mission
