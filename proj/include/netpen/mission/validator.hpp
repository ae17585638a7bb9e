#pragma once

#include "netpen/core/errors.hpp"
#include "netpen/guidance/helix.hpp"
#include "netpen/mission/plan.hpp"
#include "netpen/mission/world.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netpen::mission {

struct BatteryModel {
  double inspection_cost{25.0};     // % per inspect_net
  double move_cost_per_meter{0.0};  // % per metre travelled by move_to
  double critical_level{10.0};      // %
  double recharge_level{100.0};     // % after leaving a dock

  void validate() const;
};

/// Battery level after each action. A docking move records the arrival level;
/// the recharge applies when the next action starts. Levels clamp at 0.
/// `start_position` enables per-metre move costs for the first move.
std::vector<double> battery_rollforward(const std::vector<PlanAction>& actions, double start_battery,
                                        const BatteryModel& model, const WorldModel& world,
                                        const std::optional<Vector3d>& start_position = std::nullopt);

/// Rollforward against the standard station layout.
std::vector<double> battery_rollforward(const std::vector<PlanAction>& actions, double start_battery,
                                        const BatteryModel& model = {});

/// True when `action` is a move to a docking station of `world`.
bool is_dock(const PlanAction& action, const WorldModel& world);

enum class DiagnosticKind { BatteryViolation, ThrusterInfeasible, DistanceRuleViolation, DockingMissing, SchemaError };

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind{DiagnosticKind::SchemaError};
  std::string rov;        // empty for document-level problems
  int action_index{-1};   // -1 when not tied to one action
  std::string message;
};

struct Warning {
  std::string rov;
  int action_index{-1};
  std::string message;
};

struct RovVerdict {
  std::string rov;
  bool valid{true};
  double start_battery{0.0};
  double final_battery{0.0};
  std::vector<double> battery_trace;
  std::vector<Diagnostic> diagnostics;
  std::vector<Warning> warnings;
};

struct ValidationReport {
  std::vector<RovVerdict> rovs;
  std::vector<Diagnostic> diagnostics;  // every diagnostic, in check order
  std::vector<Warning> warnings;

  bool valid() const { return diagnostics.empty(); }
  const RovVerdict* find(std::string_view rov) const;
  std::size_t count(DiagnosticKind kind) const;

  /// Report for a document that failed to parse.
  static ValidationReport schema_failure(const SchemaError& error);
};

struct ValidatorOptions {
  guidance::OffsetRule preferred_offsets{guidance::OffsetRule::TwoOption};
  double inspection_distance{3.0};
  double distance_tolerance{1e-6};
  double dock_tolerance{1e-6};
  double clearance{0.5};
};

ValidationReport validate_plan(const MissionPlan& plan, const WorldModel& world, const BatteryModel& battery = {},
                               const ValidatorOptions& options = {});

/// Console rendering: "Evaluating ROV1...", "Error: ...", "ROV1 plan is NOT valid!" ...
std::string format_report(const ValidationReport& report, bool with_warnings = true);

nlohmann::json report_to_json(const ValidationReport& report);

}  // namespace netpen::mission
