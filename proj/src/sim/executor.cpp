#include "netpen/sim/executor.hpp"

#include "netpen/allocation/allocation_matrix.hpp"
#include "netpen/control/tracking.hpp"
#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"
#include "netpen/guidance/geometry.hpp"
#include "netpen/guidance/helix.hpp"
#include "netpen/sim/frames.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <stdexcept>

namespace netpen::sim {

void ExecutorConfig::validate() const {
  vehicle.validate();
  gains.validate();
  limits.validate();
  battery.validate();
  if (!(dt > 0.0 && dt <= dynamics::kMaxStep)) throw std::invalid_argument("executor dt must lie in (0, 0.1]");
  if (!(cruise_speed > 0.0)) throw std::invalid_argument("cruise speed must be positive");
  if (!(completion_radius > 0.0)) throw std::invalid_argument("completion radius must be positive");
  if (!(pause_error > 0.0)) throw std::invalid_argument("pause error must be positive");
  if (!(settle_timeout > 0.0)) throw std::invalid_argument("settle timeout must be positive");
  if (!(clearance >= 0.0)) throw std::invalid_argument("clearance must be non-negative");
  if (!(helix_duration > 0.0) || !(helix_turns >= 0.0)) throw std::invalid_argument("bad helix timing");
  if (log_every < 1) throw std::invalid_argument("log_every must be >= 1");
}

dynamics::VehicleParamsd ExecutorConfig::default_vehicle() {
  auto p = dynamics::VehicleParamsd::bluerov2();
  p.zg = 0.1;
  return p;
}

std::string_view to_string(ActionStatus status) {
  return status == ActionStatus::Completed ? "completed" : "aborted";
}

bool RovTrace::completed() const { return aborted() == nullptr && outcomes.size() == planned_actions; }

const ActionOutcome* RovTrace::aborted() const {
  for (const auto& o : outcomes)
    if (o.status == ActionStatus::Aborted) return &o;
  return nullptr;
}

bool ExecutionTrace::completed() const {
  for (const auto& r : rovs)
    if (!r.completed()) return false;
  return true;
}

const RovTrace* ExecutionTrace::find(std::string_view rov) const {
  for (const auto& r : rovs)
    if (r.rov == rov) return &r;
  return nullptr;
}

namespace {

// Radial standoff beyond the inflated cage used for transit legs (m).
constexpr double kRadialMargin = 0.05;
constexpr int kTransitAttempts = 4;

struct Abort {
  std::string reason;
};

std::string thruster_list(const std::vector<int>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + std::to_string(ids[i]);
  return out;
}

class RovRunner {
 public:
  RovRunner(const dynamics::VehicleModel<double>& model, const mission::RovStatus& rov,
            const mission::WorldModel& world, const ExecutorConfig& config, std::uint64_t seed)
      : world_(world),
        config_(config),
        rov_(rov),
        seed_(seed),
        control_(allocation::controllability_check(model.allocation(), rov.degradation)),
        loop_(model, config.limits, rov.degradation, config.gains, initial_state(rov)) {
    trace_.rov = rov.id;
    field_ = world.obstacle_field(config.clearance);
  }

  RovTrace run(const mission::RovPlan& plan) {
    trace_.planned_actions = plan.actions.size();
    double battery = rov_.battery;
    bool docked = false;
    std::optional<Vector3d> planned = rov_.position;
    Vector3d offset_point = rov_.position;
    for (std::size_t i = 0; i < plan.actions.size(); ++i) {
      const auto& a = plan.actions[i];
      if (docked) battery = std::max(battery, config_.battery.recharge_level);
      battery_ = battery;
      ActionOutcome o;
      o.index = i;
      o.kind = a.kind;
      o.target = a.target;
      o.t_start = t_;
      action_ = static_cast<int>(i);
      action_sum_.setZero();
      action_steps_ = 0;
      double cost = 0.0;
      try {
        if (a.kind == mission::ActionKind::MoveTo) {
          transit(a.position);
          cost = config_.battery.move_cost_per_meter * (planned ? (a.position - *planned).norm() : 0.0);
          planned = a.position;
          offset_point = a.position;
        } else {
          inspect(a, offset_point);
          cost = config_.battery.inspection_cost;
        }
      } catch (const Abort& abort) {
        o.status = ActionStatus::Aborted;
        o.reason = abort.reason;
      }
      o.t_end = t_;
      if (action_steps_ > 0) o.mean_abs_error = action_sum_ / static_cast<double>(action_steps_);
      if (o.status == ActionStatus::Completed) {
        battery = std::max(0.0, battery - cost);
        if (cost > 0.0 && battery < config_.battery_floor) {
          o.status = ActionStatus::Aborted;
          o.reason = fmt::format("battery {:.2f}% below the {:.0f}% safety floor", battery, config_.battery_floor);
        }
        docked = mission::is_dock(a, world_);
      }
      o.battery_after = battery;
      battery_ = battery;
      trace_.battery_trace.push_back(battery);
      trace_.outcomes.push_back(o);
      if (o.status == ActionStatus::Aborted) break;
    }
    if (steps_ > 0) trace_.mean_abs_error = sum_ / static_cast<double>(steps_);
    if (helix_steps_ > 0) trace_.inspection_mean_abs_error = helix_sum_ / static_cast<double>(helix_steps_);
    trace_.duration = t_;
    return std::move(trace_);
  }

 private:
  static dynamics::VehicleState<double> initial_state(const mission::RovStatus& rov) {
    dynamics::VehicleState<double> s;
    s.eta.head<3>() = world_to_ned(rov.position);
    s.battery = rov.battery;
    return s;
  }

  Vector3d position() const { return ned_to_world(loop_.state().eta.head<3>()); }

  // Distance on the axes the remaining thrusters can drive.
  double reachable_distance(const Vector3d& a, const Vector3d& b) const {
    const bool horizontal = control_.axis_reachable[0] && control_.axis_reachable[1];
    const bool vertical = control_.axis_reachable[2];
    const Vector3d d = a - b;
    return std::sqrt((horizontal ? d.head<2>().squaredNorm() : 0.0) + (vertical ? d.z() * d.z() : 0.0));
  }

  // One control step toward a world-frame reference; returns the remaining distance.
  double step(const Vector3d& ref_position, double ref_yaw_world, const Vector3d& ref_velocity, double ref_yaw_rate,
              bool helix) {
    control::Reference r;
    r.position = world_to_ned(ref_position);
    r.yaw = world_yaw_to_ned(ref_yaw_world);
    r.velocity = world_to_ned(ref_velocity);
    r.yaw_rate = -ref_yaw_rate;
    control::LoopStep s;
    try {
      s = loop_.advance(r, config_.dt);
    } catch (const Error& e) {
      throw Abort{std::string("simulation failure: ") + e.what()};
    }
    if (!loop_.state().eta.allFinite() || !loop_.state().nu.allFinite()) throw Abort{"simulation diverged"};
    t_ += config_.dt;
    const Vector4d abs_error = s.error.cwiseAbs();
    sum_ += abs_error;
    action_sum_ += abs_error;
    ++steps_;
    ++action_steps_;
    if (helix) {
      helix_sum_ += abs_error;
      ++helix_steps_;
    }
    trace_.max_abs_thrust = trace_.max_abs_thrust.cwiseMax(loop_.state().thrust.cwiseAbs());
    trace_.max_abs_thrust = trace_.max_abs_thrust.cwiseMax(s.command.cwiseAbs());
    if (steps_ % static_cast<std::size_t>(config_.log_every) == 0) {
      TraceRow row;
      row.t = t_;
      row.action = action_;
      row.position = position();
      row.yaw = ned_yaw_to_world(loop_.state().eta(5));
      row.reference = ref_position;
      row.thrust = loop_.state().thrust;
      row.battery = battery_;
      row.error = s.error;
      if (config_.on_row) config_.on_row(trace_.rov, row);
      trace_.rows.push_back(row);
    }
    return reachable_distance(ref_position, position());
  }

  guidance::Path3D transit_path(const Vector3d& goal) {
    const Vector3d here = position();
    guidance::Path3D path;
    path.waypoints.push_back(here);
    Vector3d from = here;
    for (int k = 0; k < 3; ++k) from(k) = std::clamp(from(k), field_.bounds.min(k), field_.bounds.max(k));
    // Inspection offset points lie on the inflated cage boundary: leave and
    // arrive along a short radial leg so the planner works in free space.
    const Vector3d to = clear_of_cages(goal);
    from = clear_of_cages(from);
    if ((from - here).norm() > 1e-9) path.waypoints.push_back(from);
    if (guidance::edge_free(field_, from, to)) {
      path.waypoints.push_back(to);
    } else {
      // Sampling can miss a feasible path; retry with fresh seeds and a larger budget.
      guidance::RrtConfig rrt = config_.rrt;
      for (int attempt = 1;; ++attempt) {
        try {
          const auto p = guidance::plan_transit(from, to, field_, rrt, seed_ + 7919u * ++plans_);
          path.waypoints.insert(path.waypoints.end(), p.waypoints.begin() + 1, p.waypoints.end());
          break;
        } catch (const NoPathFound& e) {
          if (attempt == kTransitAttempts) throw Abort{std::string("no transit path: ") + e.what()};
          rrt.max_iters *= 2;
        }
      }
    }
    if ((goal - to).norm() > 1e-9) path.waypoints.push_back(goal);
    return path;
  }

  Vector3d clear_of_cages(Vector3d p) const {
    const double margin = field_.clearance + kRadialMargin;
    for (const auto& c : field_.cages) {
      if (!guidance::inside_inflated(c, p, margin - 1e-9)) continue;
      Vector2d dir = p.head<2>() - c.center;
      dir = dir.norm() > 1e-9 ? Vector2d(dir.normalized()) : Vector2d(1.0, 0.0);
      p.head<2>() = c.center + dir * (c.radius + margin);
    }
    return p;
  }

  // Reference slides along `path` at cruise speed, holding while the vehicle lags.
  void follow(const guidance::Path3D& path, double yaw_world, const char* what) {
    const double length = path.length();
    const double v = config_.cruise_speed;
    const double deadline = t_ + length / v + config_.settle_timeout;
    double s = 0.0;
    for (;;) {
      const Vector3d p = path.point_at(s);
      Vector3d vel = Vector3d::Zero();
      if (s < length) {
        const Vector3d ahead = path.point_at(std::min(length, s + 1e-3));
        if ((ahead - p).norm() > 1e-12) vel = v * (ahead - p).normalized();
      }
      const double err = step(p, yaw_world, vel, 0.0, false);
      if (s >= length && err <= config_.completion_radius) return;
      if (err <= config_.pause_error) s = std::min(length, s + v * config_.dt);
      if (t_ > deadline) throw Abort{fmt::format("{} timed out", what)};
    }
  }

  void transit(const Vector3d& goal) {
    follow(transit_path(goal), ned_yaw_to_world(loop_.state().eta(5)), "move_to");
  }

  void inspect(const mission::PlanAction& a, const Vector3d& offset_point) {
    if (!control_.capable) {
      throw Abort{fmt::format("controllability lost: thrusters {} failed, surge/sway/heave/yaw not controllable",
                              thruster_list(rov_.failed_thrusters()))};
    }
    const auto* cage = world_.find_cage(a.target);
    if (!cage) throw Abort{"unknown cage " + a.target};
    const Vector2d rel = offset_point.head<2>() - cage->center;
    const double theta0 = rel.norm() > 1e-9 ? std::atan2(rel.y(), rel.x()) : 0.0;
    const auto spec = guidance::HelixSpec::for_cage(*cage, a.direction, theta0, a.distance, config_.helix_turns,
                                                    config_.helix_duration);
    // Entry: straight to the helix start, already facing the net.
    const auto first = guidance::helix_sample(spec, 0.0);
    guidance::Path3D entry;
    entry.waypoints = {position(), first.position};
    follow(entry, first.yaw, "helix entry");

    const double deadline = t_ + 3.0 * spec.duration + config_.settle_timeout;
    double tau = 0.0;
    for (;;) {
      const auto h = guidance::helix_sample(spec, tau);
      const bool running = tau < spec.duration;
      const double err = step(h.position, h.yaw, running ? h.velocity : Vector3d::Zero(),
                              running ? h.yaw_rate : 0.0, true);
      if (!running) return;
      if (err <= config_.pause_error) tau = std::min(spec.duration, tau + config_.dt);
      if (t_ > deadline) throw Abort{"inspection timed out"};
    }
  }

  const mission::WorldModel& world_;
  const ExecutorConfig& config_;
  mission::RovStatus rov_;
  std::uint64_t seed_;
  allocation::Controllability control_;
  control::TrackingLoop loop_;
  guidance::ObstacleField field_;
  RovTrace trace_;
  double t_{0.0};
  double battery_{0.0};
  int action_{-1};
  int plans_{0};
  Vector4d sum_{Vector4d::Zero()}, helix_sum_{Vector4d::Zero()}, action_sum_{Vector4d::Zero()};
  std::size_t steps_{0}, helix_steps_{0}, action_steps_{0};
};

}  // namespace

ExecutionTrace execute_plan(const mission::MissionPlan& plan, const mission::WorldModel& world,
                            const ExecutorConfig& config) {
  config.validate();
  const dynamics::VehicleModel<double> model(config.vehicle, allocation::standard_allocation_matrix<double>());
  std::vector<const mission::RovStatus*> rovs;
  for (const auto& p : plan.rovs) {
    const auto* r = world.find_rov(p.rov_id);
    if (!r) throw SchemaError(p.rov_id, "plan names a ROV that is not in the world");
    rovs.push_back(r);
  }
  auto run_one = [&](std::size_t i) {
    RovRunner runner(model, *rovs[i], world, config, config.seed * 1000003u + 1009u * (i + 1));
    return runner.run(plan.rovs[i]);
  };
  ExecutionTrace out;
  out.rovs.resize(plan.rovs.size());
  if (config.parallel && plan.rovs.size() > 1) {
    std::vector<std::future<RovTrace>> jobs;
    for (std::size_t i = 0; i < plan.rovs.size(); ++i) jobs.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = 0; i < jobs.size(); ++i) out.rovs[i] = jobs[i].get();
  } else {
    for (std::size_t i = 0; i < plan.rovs.size(); ++i) out.rovs[i] = run_one(i);
  }
  return out;
}

void write_trace_csv(const RovTrace& trace, std::ostream& out) {
  out << "t,action,x,y,z,yaw,ref_x,ref_y,ref_z,T1,T2,T3,T4,T5,T6,battery,ex,ey,ez,eyaw\n";
  for (const auto& r : trace.rows) {
    out << fmt::format("{:.3f},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}", r.t, r.action, r.position.x(),
                       r.position.y(), r.position.z(), r.yaw, r.reference.x(), r.reference.y(), r.reference.z());
    for (int i = 0; i < 6; ++i) out << fmt::format(",{:.6f}", r.thrust(i));
    out << fmt::format(",{:.2f},{:.6f},{:.6f},{:.6f},{:.6f}\n", r.battery, r.error(0), r.error(1), r.error(2),
                       r.error(3));
  }
}

std::vector<std::filesystem::path> write_trace_csvs(const ExecutionTrace& trace, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> files;
  for (const auto& r : trace.rovs) {
    const auto path = dir / (r.rov + ".csv");
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    write_trace_csv(r, f);
    files.push_back(path);
  }
  const auto path = dir / "outcomes.csv";
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << "rov,index,kind,target,status,reason,t_start,t_end,battery_after\n";
  for (const auto& r : trace.rovs)
    for (const auto& o : r.outcomes)
      f << fmt::format("{},{},{},{},{},\"{}\",{:.3f},{:.3f},{:.2f}\n", r.rov, o.index,
                       o.kind == mission::ActionKind::MoveTo ? "move_to" : "inspect_net", o.target, to_string(o.status),
                       o.reason, o.t_start, o.t_end, o.battery_after);
  files.push_back(path);
  return files;
}

std::string format_summary(const ExecutionTrace& trace) {
  std::string out;
  for (const auto& r : trace.rovs) {
    const double final_battery = r.battery_trace.empty() ? 0.0 : r.battery_trace.back();
    if (const auto* a = r.aborted()) {
      out += fmt::format("{}: aborted at action {} ({} {}) after {:.1f} s: {}\n", r.rov, a->index,
                         a->kind == mission::ActionKind::MoveTo ? "move_to" : "inspect_net", a->target, r.duration,
                         a->reason);
    } else {
      out += fmt::format("{}: completed {}/{} actions in {:.1f} s, final battery {:.2f}%\n", r.rov,
                         r.outcomes.size(), r.planned_actions, r.duration, final_battery);
    }
    const auto& e = r.inspection_mean_abs_error;
    out += fmt::format("  inspection mean |error|: x {:.3f} m, y {:.3f} m, z {:.3f} m, yaw {:.3f} rad\n", e(0), e(1),
                       e(2), e(3));
    out += "  max |thrust| (N):";
    for (int i = 0; i < 6; ++i) out += fmt::format(" T{} {:.2f}", i + 1, r.max_abs_thrust(i));
    out += "\n";
  }
  return out;
}

}  // namespace netpen::sim
