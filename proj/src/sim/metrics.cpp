#include "netpen/sim/metrics.hpp"

#include "netpen/allocation/allocation_matrix.hpp"
#include "netpen/control/tracking.hpp"
#include "netpen/guidance/helix.hpp"
#include "netpen/sim/frames.hpp"

#include <fmt/format.h>

#include <map>
#include <stdexcept>

namespace netpen::sim {

std::vector<FaultCondition> standard_fault_conditions() {
  return {{"Normal", {}}, {"F2", {2}}, {"F2,5", {2, 5}}, {"F2,4,5", {2, 4, 5}}};
}

PlannerMetrics compute_metrics(const std::function<planning::PlanningResult(int run)>& plan_once,
                               const mission::WorldModel& world, int n, const ExecutorConfig& executor,
                               std::string label, TimeBasis basis) {
  if (n < 1) throw std::invalid_argument("compute_metrics: n must be >= 1");
  PlannerMetrics m;
  m.label = std::move(label);
  m.runs = n;
  std::map<std::string, bool> executed;
  double seconds = 0.0;
  for (int run = 0; run < n; ++run) {
    const auto r = plan_once(run);
    seconds += basis == TimeBasis::Backend ? r.backend_seconds : r.wall_seconds;
    if (!r.report.valid()) continue;
    ++m.valid_plans;
    const std::string key = mission::serialize_plan(r.plan);
    auto it = executed.find(key);
    if (it == executed.end()) it = executed.emplace(key, execute_plan(r.plan, world, executor).completed()).first;
    if (it->second) ++m.completed_executions;
  }
  m.psr = 100.0 * m.valid_plans / n;
  m.exesr = 100.0 * m.completed_executions / n;
  m.mean_seconds = seconds / n;
  return m;
}

std::vector<FaultRow> fault_condition_study(const std::vector<FaultCondition>& conditions,
                                            const ExecutorConfig& config) {
  config.validate();
  const dynamics::VehicleModel<double> model(config.vehicle, allocation::standard_allocation_matrix<double>());
  guidance::CageCylinder cage;
  const auto spec = guidance::HelixSpec::for_cage(cage, guidance::Direction::TopToBottom, 0.0, 3.0,
                                                  config.helix_turns, config.helix_duration);
  std::vector<control::TimedReference> trajectory;
  for (const auto& s : guidance::helix_trajectory(spec, config.dt)) {
    control::Reference r;
    r.position = world_to_ned(s.position);
    r.yaw = world_yaw_to_ned(s.yaw);
    r.velocity = world_to_ned(s.velocity);
    r.yaw_rate = -s.yaw_rate;
    trajectory.push_back({s.t, r});
  }
  dynamics::VehicleState<double> start;
  start.eta.head<3>() = trajectory.front().ref.position;
  start.eta(5) = trajectory.front().ref.yaw;

  std::vector<FaultRow> rows;
  for (const auto& c : conditions) {
    Vector6d d = Vector6d::Ones();
    for (int t : c.failed) {
      if (t < 1 || t > 6) throw std::invalid_argument("thruster id out of range in fault condition " + c.name);
      d(t - 1) = 0.0;
    }
    const auto log = control::track_trajectory(trajectory, model, config.limits, allocation::DegradationVectord(d),
                                               config.gains, start, config.dt);
    FaultRow row{c.name, c.failed, log.mean_abs_error, log.max_abs_error, Vector6d::Zero()};
    for (const auto& r : log.rows) row.max_abs_thrust = row.max_abs_thrust.cwiseMax(r.state.thrust.cwiseAbs());
    rows.push_back(row);
  }
  return rows;
}

std::string MetricsReport::format() const {
  std::string out;
  if (!planners.empty()) {
    out += fmt::format("{:<24} {:>6} {:>8} {:>10}\n", "Planner", "PSR %", "EXESR %", "Time (s)");
    for (const auto& p : planners)
      out += fmt::format("{:<24} {:>6.1f} {:>8.1f} {:>10.3f}\n", p.label, p.psr, p.exesr, p.mean_seconds);
  }
  if (!faults.empty()) {
    if (!out.empty()) out += "\n";
    out += fmt::format("{:<10} {:>8} {:>8} {:>8} {:>10}\n", "Condition", "X (m)", "Y (m)", "Z (m)", "Yaw (rad)");
    for (const auto& f : faults)
      out += fmt::format("{:<10} {:>8.3f} {:>8.3f} {:>8.3f} {:>10.3f}\n", f.condition, f.mean_abs_error(0),
                         f.mean_abs_error(1), f.mean_abs_error(2), f.mean_abs_error(3));
  }
  return out;
}

nlohmann::json MetricsReport::to_json() const {
  nlohmann::json p = nlohmann::json::array();
  for (const auto& m : planners)
    p.push_back({{"label", m.label},
                 {"runs", m.runs},
                 {"valid_plans", m.valid_plans},
                 {"completed_executions", m.completed_executions},
                 {"psr", m.psr},
                 {"exesr", m.exesr},
                 {"mean_seconds", m.mean_seconds}});
  nlohmann::json f = nlohmann::json::array();
  for (const auto& r : faults) {
    auto vec = [](const auto& v) {
      std::vector<double> out(v.data(), v.data() + v.size());
      return out;
    };
    f.push_back({{"condition", r.condition},
                 {"failed", r.failed},
                 {"mean_abs_error", vec(r.mean_abs_error)},
                 {"max_abs_error", vec(r.max_abs_error)},
                 {"max_abs_thrust", vec(r.max_abs_thrust)}});
  }
  return {{"planners", p}, {"faults", f}};
}

}  // namespace netpen::sim
