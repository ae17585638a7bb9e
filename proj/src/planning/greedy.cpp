#include "netpen/planning/greedy.hpp"

#include "netpen/allocation/allocation_matrix.hpp"
#include "netpen/allocation/allocator.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <set>

namespace netpen::planning {

using mission::PlanAction;

namespace {

struct RovState {
  const mission::RovStatus* status;
  Vector3d pos;
  double battery;
  std::vector<PlanAction> actions;
  std::optional<guidance::Direction> last_dir;
  bool capable;
};

class Greedy {
 public:
  Greedy(const mission::WorldModel& world, const mission::BatteryModel& battery, const GreedyOptions& options)
      : world_(world), battery_(battery), opt_(options) {}

  double move_cost(const Vector3d& a, const Vector3d& b) const { return battery_.move_cost_per_meter * (a - b).norm(); }

  /// Nearest legal inspection point: preferred offsets first, then the other axes.
  std::optional<Vector3d> offset(const guidance::CageCylinder& cage, const Vector3d& from) const {
    for (auto rule : {opt_.offsets, guidance::OffsetRule::AllAxes}) {
      auto cands = guidance::offset_candidates(cage, rule);
      std::stable_sort(cands.begin(), cands.end(), [&](const Vector2d& a, const Vector2d& b) {
        return (a - from.head<2>()).norm() < (b - from.head<2>()).norm();
      });
      for (const auto& c : cands) {
        const Vector3d p(c.x(), c.y(), 0.0);
        bool blocked = false;
        for (const auto& other : world_.cages) blocked = blocked || guidance::inside_inflated(other, p, opt_.clearance);
        if (!blocked) return p;
      }
    }
    return std::nullopt;
  }

  Vector3d station_point(const mission::DockingStation& s) const { return {s.position.x(), s.position.y(), 0.0}; }

  bool feasible(const RovState& r, const guidance::CageCylinder& cage) const {
    const auto p = offset(cage, r.pos);
    if (!p) return false;
    const double after = r.battery - move_cost(r.pos, *p) - battery_.inspection_cost;
    if (after < battery_.critical_level) return false;
    const auto* st = world_.nearest_station(p->head<2>());
    if (!st || battery_.move_cost_per_meter == 0.0) return true;
    return after - move_cost(*p, station_point(*st)) >= battery_.critical_level;
  }

  void inspect(RovState& r, const guidance::CageCylinder& cage) const {
    const Vector3d p = *offset(cage, r.pos);
    const auto dir = r.last_dir ? guidance::opposite(*r.last_dir) : guidance::Direction::TopToBottom;
    r.actions.push_back(PlanAction::move_to(cage.id, p));
    r.actions.push_back(PlanAction::inspect_net(cage.id, dir));
    r.battery = std::max(0.0, r.battery - move_cost(r.pos, p) - battery_.inspection_cost);
    r.pos = p;
    r.last_dir = dir;
  }

  bool recharge(RovState& r) const {
    const auto* st = world_.nearest_station(r.pos.head<2>());
    if (!st) return false;
    const Vector3d p = station_point(*st);
    r.actions.push_back(PlanAction::move_to(st->id, p));
    r.pos = p;
    r.battery = battery_.recharge_level;
    return true;
  }

 private:
  const mission::WorldModel& world_;
  const mission::BatteryModel& battery_;
  const GreedyOptions& opt_;
};

}  // namespace

mission::MissionPlan greedy_plan(const mission::WorldModel& world, const TaskSpec& spec,
                                 const mission::BatteryModel& battery, const GreedyOptions& options) {
  const Greedy g(world, battery, options);
  static const Matrix6d k = allocation::standard_allocation_matrix<double>();

  std::vector<RovState> rovs;
  for (const auto& r : world.rovs) {
    const double start = spec.battery_cap ? std::min(r.battery, *spec.battery_cap) : r.battery;
    rovs.push_back({&r, r.position, start, {}, std::nullopt, allocation::controllability_check(k, r.degradation).capable});
  }
  auto usable = [&](const RovState& r) { return r.capable || !options.gate_thrusters; };

  std::set<std::string> done;
  for (auto& r : rovs) {
    const auto it = spec.fixed.find(r.status->id);
    if (it == spec.fixed.end() || !usable(r)) continue;
    for (const auto& id : it->second) {
      const auto* cage = world.find_cage(id);
      if (!cage || done.count(id) || !g.offset(*cage, r.pos)) continue;
      if (!g.feasible(r, *cage) && options.insert_recharge) {
        g.recharge(r);
        if (!g.feasible(r, *cage)) continue;
      }
      g.inspect(r, *cage);
      done.insert(id);
    }
  }

  std::vector<const guidance::CageCylinder*> pool;
  for (const auto& id : spec.pool) {
    const auto* cage = world.find_cage(id);
    if (cage && !done.count(id)) pool.push_back(cage);
  }
  std::vector<RovState*> eligible;
  for (auto& r : rovs)
    if (usable(r) && std::find(spec.pool_rovs.begin(), spec.pool_rovs.end(), r.status->id) != spec.pool_rovs.end())
      eligible.push_back(&r);

  while (!pool.empty() && !eligible.empty()) {
    RovState* best_r = nullptr;
    std::size_t best_c = 0;
    double best_d = std::numeric_limits<double>::infinity();
    auto consider = [&](bool need_feasible) {
      for (auto* r : eligible) {
        for (std::size_t c = 0; c < pool.size(); ++c) {
          const auto p = g.offset(*pool[c], r->pos);
          if (!p || (need_feasible && !g.feasible(*r, *pool[c]))) continue;
          const double d = (p->head<2>() - r->pos.head<2>()).norm();
          if (d < best_d) {
            best_d = d;
            best_r = r;
            best_c = c;
          }
        }
      }
    };
    consider(true);
    if (!best_r && !options.insert_recharge) consider(false);
    if (best_r) {
      g.inspect(*best_r, *pool[best_c]);
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best_c));
      continue;
    }
    if (!options.insert_recharge) break;
    RovState* fullest = nullptr;
    for (auto* r : eligible)
      if (r->battery < battery.recharge_level && (!fullest || r->battery > fullest->battery)) fullest = r;
    if (!fullest || !g.recharge(*fullest)) break;
  }

  // Final docking: globally nearest (ROV, station) pairs, distinct while stations last.
  std::set<std::string> free_stations;
  std::vector<RovState*> waiting;
  for (auto& r : rovs) waiting.push_back(&r);
  while (!waiting.empty() && !world.stations.empty()) {
    if (free_stations.empty())
      for (const auto& s : world.stations) free_stations.insert(s.id);
    std::size_t bi = 0;
    const mission::DockingStation* bs = nullptr;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < waiting.size(); ++i) {
      for (const auto& s : world.stations) {
        if (!free_stations.count(s.id)) continue;
        const double d = (s.position - waiting[i]->pos.head<2>()).norm();
        if (d < bd) {
          bd = d;
          bi = i;
          bs = &s;
        }
      }
    }
    waiting[bi]->actions.push_back(PlanAction::move_to(bs->id, Vector3d(bs->position.x(), bs->position.y(), 0.0)));
    free_stations.erase(bs->id);
    waiting.erase(waiting.begin() + static_cast<std::ptrdiff_t>(bi));
  }

  mission::MissionPlan plan;
  for (auto& r : rovs) {
    const auto trace = mission::battery_rollforward(r.actions, r.status->battery, battery, world, r.status->position);
    plan.rovs.push_back({r.status->id, std::move(r.actions),
                         mission::format_battery_status(trace.empty() ? r.status->battery : trace.back()),
                         mission::format_thruster_status(r.status->failed_thrusters())});
  }
  return plan;
}

}  // namespace netpen::planning
