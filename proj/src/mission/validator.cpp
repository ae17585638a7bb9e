#include "netpen/mission/validator.hpp"

#include "netpen/allocation/allocation_matrix.hpp"
#include "netpen/allocation/allocator.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

namespace netpen::mission {

void BatteryModel::validate() const {
  if (!(inspection_cost >= 0.0) || !(move_cost_per_meter >= 0.0))
    throw std::invalid_argument("battery costs must be non-negative");
  if (!(critical_level >= 0.0 && critical_level <= recharge_level && recharge_level <= 100.0))
    throw std::invalid_argument("battery levels must satisfy 0 <= critical <= recharge <= 100");
}

bool is_dock(const PlanAction& action, const WorldModel& world) {
  return action.kind == ActionKind::MoveTo && world.find_station(action.target) != nullptr;
}

namespace {

// Cost of each action under the model, with the position reached after it.
struct CostStep {
  double cost;
  bool dock;
};

std::vector<CostStep> action_costs(const std::vector<PlanAction>& actions, const BatteryModel& model,
                                   const WorldModel& world, const std::optional<Vector3d>& start_position) {
  std::vector<CostStep> out;
  std::optional<Vector3d> pos = start_position;
  for (const auto& a : actions) {
    if (a.kind == ActionKind::MoveTo) {
      const double d = pos ? (a.position - *pos).norm() : 0.0;
      out.push_back({model.move_cost_per_meter * d, is_dock(a, world)});
      pos = a.position;
    } else {
      out.push_back({model.inspection_cost, false});
    }
  }
  return out;
}

}  // namespace

std::vector<double> battery_rollforward(const std::vector<PlanAction>& actions, double start_battery,
                                        const BatteryModel& model, const WorldModel& world,
                                        const std::optional<Vector3d>& start_position) {
  std::vector<double> trace;
  trace.reserve(actions.size());
  double level = start_battery;
  bool docked = false;
  for (const auto& step : action_costs(actions, model, world, start_position)) {
    if (docked) level = std::max(level, model.recharge_level);
    level = std::max(0.0, level - step.cost);
    docked = step.dock;
    trace.push_back(level);
  }
  return trace;
}

std::vector<double> battery_rollforward(const std::vector<PlanAction>& actions, double start_battery,
                                        const BatteryModel& model) {
  return battery_rollforward(actions, start_battery, model, WorldModel::standard_layout());
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::BatteryViolation: return "BatteryViolation";
    case DiagnosticKind::ThrusterInfeasible: return "ThrusterInfeasible";
    case DiagnosticKind::DistanceRuleViolation: return "DistanceRuleViolation";
    case DiagnosticKind::DockingMissing: return "DockingMissing";
    case DiagnosticKind::SchemaError: return "SchemaError";
  }
  return "?";
}

const RovVerdict* ValidationReport::find(std::string_view rov) const {
  for (const auto& r : rovs)
    if (r.rov == rov) return &r;
  return nullptr;
}

std::size_t ValidationReport::count(DiagnosticKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic& d) { return d.kind == kind; }));
}

ValidationReport ValidationReport::schema_failure(const SchemaError& error) {
  ValidationReport r;
  r.diagnostics.push_back({DiagnosticKind::SchemaError, "", -1, error.what()});
  return r;
}

namespace {

class RovChecker {
 public:
  RovChecker(const RovPlan& plan, const WorldModel& world, const BatteryModel& battery,
             const ValidatorOptions& options, RovVerdict& verdict)
      : plan_(plan), world_(world), battery_(battery), opt_(options), v_(verdict) {}

  void run() {
    const RovStatus* rov = world_.find_rov(plan_.rov_id);
    if (!rov) {
      error(DiagnosticKind::SchemaError, -1, fmt::format("Unknown ROV '{}'!", plan_.rov_id));
      return;
    }
    v_.start_battery = rov->battery;
    v_.final_battery = rov->battery;
    if (!check_schema()) return;
    check_distances(*rov);
    check_battery(*rov);
    check_thrusters(*rov);
    check_docking(*rov);
    check_declared(*rov);
  }

 private:
  void error(DiagnosticKind kind, int index, std::string message) {
    v_.diagnostics.push_back({kind, plan_.rov_id, index, std::move(message)});
    v_.valid = false;
  }

  void warn(int index, std::string message) { v_.warnings.push_back({plan_.rov_id, index, std::move(message)}); }

  bool check_schema() {
    bool ok = true;
    for (std::size_t i = 0; i < plan_.actions.size(); ++i) {
      const auto& a = plan_.actions[i];
      const int idx = static_cast<int>(i);
      if (a.kind == ActionKind::InspectNet) {
        if (!world_.find_cage(a.target)) {
          error(DiagnosticKind::SchemaError, idx, fmt::format("inspect_net target '{}' is not a cage!", a.target));
          ok = false;
        }
        if (!std::isfinite(a.distance)) {
          error(DiagnosticKind::SchemaError, idx, "inspect_net distance is not finite!");
          ok = false;
        }
        continue;
      }
      if (!world_.find_cage(a.target) && !world_.find_station(a.target)) {
        error(DiagnosticKind::SchemaError, idx, fmt::format("Unknown target '{}'!", a.target));
        ok = false;
      }
      if (!a.position.allFinite()) {
        error(DiagnosticKind::SchemaError, idx, "move_to coordinates are not finite!");
        ok = false;
      } else if (a.position.z() > 0.0) {
        error(DiagnosticKind::SchemaError, idx,
              fmt::format("move_to('{}') depth z = {:.2f} lies above the surface!", a.target, a.position.z()));
        ok = false;
      }
    }
    return ok;
  }

  void check_distances(const RovStatus& rov) {
    Vector2d pos = rov.position.head<2>();
    for (std::size_t i = 0; i < plan_.actions.size(); ++i) {
      const auto& a = plan_.actions[i];
      const int idx = static_cast<int>(i);
      if (a.kind == ActionKind::MoveTo) {
        for (const auto& cage : world_.cages) {
          if (guidance::inside_inflated(cage, a.position, opt_.clearance)) {
            error(DiagnosticKind::DistanceRuleViolation, idx,
                  fmt::format("move_to('{}') target ({:.2f}, {:.2f}, {:.2f}) is inside the clearance of {}!", a.target,
                              a.position.x(), a.position.y(), a.position.z(), cage.id));
            break;
          }
        }
        pos = a.position.head<2>();
        continue;
      }
      const auto* cage = world_.find_cage(a.target);
      if (std::abs(a.distance - opt_.inspection_distance) > opt_.distance_tolerance) {
        error(DiagnosticKind::DistanceRuleViolation, idx,
              fmt::format("inspect_net('{}') distance {} differs from the required {} m!", a.target, a.distance,
                          opt_.inspection_distance));
        continue;
      }
      const double r = (pos - cage->center).norm();
      if (std::abs(r - opt_.inspection_distance) > opt_.distance_tolerance) {
        error(DiagnosticKind::DistanceRuleViolation, idx,
              fmt::format("Inspection of {} from ({:.2f}, {:.2f}) is {:.2f} m from the cage center; exactly {} m "
                          "is required!",
                          a.target, pos.x(), pos.y(), r, opt_.inspection_distance));
        continue;
      }
      bool preferred = false;
      for (const auto& c : guidance::offset_candidates(*cage, opt_.preferred_offsets, opt_.inspection_distance))
        preferred = preferred || (c - pos).norm() <= opt_.distance_tolerance;
      if (!preferred)
        warn(idx, fmt::format("Inspection of {} uses the non-preferred offset ({:.2f}, {:.2f}).", a.target, pos.x(),
                              pos.y()));
    }
  }

  void check_battery(const RovStatus& rov) {
    v_.battery_trace = battery_rollforward(plan_.actions, rov.battery, battery_, world_, rov.position);
    v_.final_battery = v_.battery_trace.empty() ? rov.battery : v_.battery_trace.back();
    const auto costs = action_costs(plan_.actions, battery_, world_, rov.position);
    for (std::size_t i = 0; i < v_.battery_trace.size(); ++i) {
      // Only actions that spend charge can violate the rule; a vehicle that
      // starts low and docks straight away is compliant.
      if (costs[i].cost > 0.0 && v_.battery_trace[i] < battery_.critical_level) {
        error(DiagnosticKind::BatteryViolation, static_cast<int>(i),
              fmt::format("Battery constraint violated! Battery is now {:.2f}%, too low before reaching docking "
                          "station.",
                          v_.battery_trace[i]));
        return;
      }
    }
  }

  void check_thrusters(const RovStatus& rov) {
    const auto first_inspect = std::find_if(plan_.actions.begin(), plan_.actions.end(),
                                            [](const PlanAction& a) { return a.kind == ActionKind::InspectNet; });
    if (first_inspect == plan_.actions.end()) return;
    static const Matrix6d k = allocation::standard_allocation_matrix<double>();
    if (allocation::controllability_check(k, rov.degradation).capable) return;
    const auto failed = rov.failed_thrusters();
    error(DiagnosticKind::ThrusterInfeasible, static_cast<int>(first_inspect - plan_.actions.begin()),
          fmt::format("Thruster {} failures prevent net inspection!", fmt::join(failed, ", ")));
  }

  void check_docking(const RovStatus& rov) {
    const int n = static_cast<int>(plan_.actions.size());
    for (int i = 0; i < n; ++i) {
      const auto& a = plan_.actions[static_cast<std::size_t>(i)];
      if (!is_dock(a, world_)) continue;
      const auto* st = world_.find_station(a.target);
      if ((a.position.head<2>() - st->position).norm() > opt_.dock_tolerance)
        error(DiagnosticKind::DockingMissing, i,
              fmt::format("Docking coordinates ({:.2f}, {:.2f}) do not match {} at ({:.2f}, {:.2f})!",
                          a.position.x(), a.position.y(), st->id, st->position.x(), st->position.y()));
    }
    if (n == 0 || !is_dock(plan_.actions.back(), world_)) {
      error(DiagnosticKind::DockingMissing, n - 1, "Plan does not end at a docking station!");
      return;
    }
    Vector2d prev = rov.position.head<2>();
    for (int i = 0; i + 1 < n; ++i) {
      const auto& a = plan_.actions[static_cast<std::size_t>(i)];
      if (a.kind == ActionKind::MoveTo) prev = a.position.head<2>();
    }
    const auto* nearest = world_.nearest_station(prev);
    const auto& last = plan_.actions.back();
    if (nearest && nearest->id != last.target &&
        (world_.find_station(last.target)->position - prev).norm() > (nearest->position - prev).norm() + 1e-9)
      warn(n - 1, fmt::format("{} docks at {}; the nearest station is {}.", plan_.rov_id, last.target, nearest->id));
  }

  void check_declared(const RovStatus& rov) {
    const int n = static_cast<int>(plan_.actions.size());
    std::optional<guidance::Direction> last_dir;
    for (int i = 0; i < n; ++i) {
      const auto& a = plan_.actions[static_cast<std::size_t>(i)];
      if (a.kind != ActionKind::InspectNet) continue;
      if (last_dir && *last_dir == a.direction)
        warn(i, fmt::format("Inspection direction of {} does not alternate ({} twice in a row).", a.target,
                            guidance::to_string(a.direction)));
      last_dir = a.direction;
    }
    const auto declared = plan_.declared_battery();
    if (!declared)
      warn(-1, fmt::format("BatteryStatus '{}' is not a percentage.", plan_.battery_status));
    else if (std::abs(*declared - v_.final_battery) > 0.5)
      warn(-1, fmt::format("Declared BatteryStatus {} differs from the computed {:.2f}%.", plan_.battery_status,
                           v_.final_battery));
    const auto faulty = parse_thruster_status(plan_.thruster_status);
    if (!faulty)
      warn(-1, fmt::format("ThrusterStatus '{}' is not recognized.", plan_.thruster_status));
    else if (*faulty != rov.failed_thrusters())
      warn(-1, fmt::format("Declared ThrusterStatus '{}' differs from '{}'.", plan_.thruster_status,
                           format_thruster_status(rov.failed_thrusters())));
  }

  const RovPlan& plan_;
  const WorldModel& world_;
  const BatteryModel& battery_;
  const ValidatorOptions& opt_;
  RovVerdict& v_;
};

}  // namespace

ValidationReport validate_plan(const MissionPlan& plan, const WorldModel& world, const BatteryModel& battery,
                               const ValidatorOptions& options) {
  battery.validate();
  ValidationReport report;
  std::map<std::string, int> seen;
  for (const auto& rp : plan.rovs) {
    RovVerdict v;
    v.rov = rp.rov_id;
    if (seen[rp.rov_id]++ > 0) {
      v.valid = false;
      v.diagnostics.push_back({DiagnosticKind::SchemaError, rp.rov_id, -1,
                               fmt::format("ROV '{}' appears more than once!", rp.rov_id)});
    } else {
      RovChecker(rp, world, battery, options, v).run();
    }
    report.diagnostics.insert(report.diagnostics.end(), v.diagnostics.begin(), v.diagnostics.end());
    report.warnings.insert(report.warnings.end(), v.warnings.begin(), v.warnings.end());
    report.rovs.push_back(std::move(v));
  }

  // Station sharing is advisory while there are enough stations to go round.
  std::map<std::string, std::vector<std::string>> final_station;
  for (const auto& rp : plan.rovs)
    if (!rp.actions.empty() && is_dock(rp.actions.back(), world))
      final_station[rp.actions.back().target].push_back(rp.rov_id);
  if (plan.rovs.size() <= world.stations.size()) {
    for (const auto& [station, rovs] : final_station)
      if (rovs.size() > 1)
        report.warnings.push_back(
            {"", -1, fmt::format("{} share {} although enough stations exist.", fmt::join(rovs, " and "), station)});
  }
  for (const auto& r : world.rovs)
    if (!plan.find(r.id)) report.warnings.push_back({r.id, -1, fmt::format("{} has no plan.", r.id)});
  return report;
}

std::string format_report(const ValidationReport& report, bool with_warnings) {
  std::string out;
  for (const auto& d : report.diagnostics)
    if (d.rov.empty()) out += fmt::format("Error: {}\n", d.message);
  for (const auto& v : report.rovs) {
    out += fmt::format("Evaluating {}...\n", v.rov);
    for (const auto& d : v.diagnostics) out += fmt::format("Error: {}\n", d.message);
    if (with_warnings)
      for (const auto& w : v.warnings) out += fmt::format("Warning: {}\n", w.message);
    if (v.valid) {
      out += fmt::format("{} plan is VALID.\n", v.rov);
      out += fmt::format("Final Battery: {:.2f}%\n", v.final_battery);
    } else {
      out += fmt::format("{} plan is NOT valid!\n", v.rov);
    }
  }
  if (with_warnings)
    for (const auto& w : report.warnings)
      if (w.rov.empty() || !report.find(w.rov)) out += fmt::format("Warning: {}\n", w.message);
  if (report.rovs.empty() && !report.valid()) out += "Plan is NOT valid!\n";
  return out;
}

nlohmann::json report_to_json(const ValidationReport& report) {
  auto diag = [](const Diagnostic& d) {
    return nlohmann::json{{"kind", to_string(d.kind)}, {"rov", d.rov}, {"action_index", d.action_index},
                          {"message", d.message}};
  };
  auto warning = [](const Warning& w) {
    return nlohmann::json{{"rov", w.rov}, {"action_index", w.action_index}, {"message", w.message}};
  };
  nlohmann::json j;
  j["valid"] = report.valid();
  j["diagnostics"] = nlohmann::json::array();
  for (const auto& d : report.diagnostics) j["diagnostics"].push_back(diag(d));
  j["warnings"] = nlohmann::json::array();
  for (const auto& w : report.warnings) j["warnings"].push_back(warning(w));
  j["rovs"] = nlohmann::json::array();
  for (const auto& v : report.rovs) {
    nlohmann::json r{{"rov", v.rov},
                     {"valid", v.valid},
                     {"start_battery", v.start_battery},
                     {"final_battery", v.final_battery},
                     {"battery_trace", v.battery_trace}};
    r["diagnostics"] = nlohmann::json::array();
    for (const auto& d : v.diagnostics) r["diagnostics"].push_back(diag(d));
    r["warnings"] = nlohmann::json::array();
    for (const auto& w : v.warnings) r["warnings"].push_back(warning(w));
    j["rovs"].push_back(std::move(r));
  }
  return j;
}

}  // namespace netpen::mission
