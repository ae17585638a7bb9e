#include "netpen/planning/mas.hpp"

#include "netpen/allocation/allocator.hpp"
#include "netpen/core/text.hpp"
#include "netpen/planning/greedy.hpp"
#include "netpen/planning/instruction.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <future>
#include <limits>
#include <map>
#include <set>

namespace netpen::planning {

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::Battery: return "battery";
    case RejectReason::Thruster: return "thruster";
    case RejectReason::Other: return "other";
  }
  return "?";
}

namespace {

double distance_to(const mission::WorldModel& w, const mission::RovStatus& r, const std::string& cage) {
  const auto* c = w.find_cage(cage);
  return c ? (c->center - r.position.head<2>()).norm() : std::numeric_limits<double>::infinity();
}

// Nearest-neighbour tour over `cages` from the ROV's start position.
std::vector<std::string> tour(const mission::WorldModel& w, const mission::RovStatus& r,
                              std::vector<std::string> cages) {
  std::vector<std::string> out;
  Vector2d pos = r.position.head<2>();
  while (!cages.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < cages.size(); ++i)
      if ((w.find_cage(cages[i])->center - pos).norm() < (w.find_cage(cages[best])->center - pos).norm()) best = i;
    pos = w.find_cage(cages[best])->center;
    out.push_back(cages[best]);
    cages.erase(cages.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

}  // namespace

AgentReply RuleAgent::evaluate(const Proposal& p, const PlannerInputs& in) {
  AgentReply reply;
  const auto* rov = in.world.find_rov(p.rov);
  if (!rov) {
    for (const auto& c : p.cages) reply.reject.push_back({c, RejectReason::Other, "unknown ROV"});
    return reply;
  }
  static const Matrix6d k = allocation::standard_allocation_matrix<double>();
  const auto& b = in.battery;
  const int held = static_cast<int>(p.accepted.size());
  if (!allocation::controllability_check(k, rov->degradation).capable) {
    const std::string why = fmt::format("thrusters {} failed: surge, sway, heave and yaw not all controllable",
                                        fmt::join(rov->failed_thrusters(), ", "));
    for (const auto& c : p.cages) reply.reject.push_back({c, RejectReason::Thruster, why});
    reply.remaining_battery = rov->battery;
    return reply;
  }
  std::vector<std::string> offered;
  for (const auto& c : p.cages)
    if (in.world.find_cage(c)) offered.push_back(c);
    else reply.reject.push_back({c, RejectReason::Other, "unknown cage"});
  std::stable_sort(offered.begin(), offered.end(), [&](const std::string& a, const std::string& c) {
    return distance_to(in.world, *rov, a) < distance_to(in.world, *rov, c);
  });
  int capacity = std::numeric_limits<int>::max();
  if (!p.recharge_allowed && b.inspection_cost > 0.0)
    capacity = static_cast<int>(std::floor((rov->battery - b.critical_level) / b.inspection_cost + 1e-9));
  int taken = held;
  for (const auto& c : offered) {
    if (taken < capacity) {
      reply.accept.push_back(c);
      ++taken;
    } else {
      reply.reject.push_back(
          {c, RejectReason::Battery,
           fmt::format("battery {}% covers only {} inspection(s) before the {}% floor", rov->battery,
                       std::max(capacity, 0), b.critical_level)});
    }
  }
  reply.remaining_battery = rov->battery - b.inspection_cost * taken;
  return reply;
}

std::string BackendAgent::agent_prompt(const Proposal& p, const PlannerInputs& in) {
  const auto* rov = in.world.find_rov(p.rov);
  std::string s = fmt::format("You are the planning agent of {}. The central planner offers you cages to inspect.\n",
                              p.rov);
  if (rov) {
    s += fmt::format("Position: ({}, {}, {}). Battery: {}%. Thruster Status: {}.\n", rov->position.x(),
                     rov->position.y(), rov->position.z(), rov->battery, describe_thrusters(*rov));
  }
  s += fmt::format("Already assigned to you: [{}]\n", fmt::join(p.accepted, ", "));
  s += "Offered now:\n";
  for (const auto& c : p.cages) {
    const auto* cage = in.world.find_cage(c);
    if (cage) s += fmt::format("- {} at ({}, {})\n", c, cage->center.x(), cage->center.y());
  }
  s += fmt::format(
      "Each inspection costs {}% battery; you must not drop below {}% before docking. Intermediate docking to "
      "recharge is {}.\n",
      in.battery.inspection_cost, in.battery.critical_level, p.recharge_allowed ? "allowed" : "not allowed");
  s += "You may inspect only if your working thrusters control surge, sway, heave and yaw.\n";
  s += "Reply with JSON only: {\"accept\": [cage ids], \"reject\": [{\"cage\": id, \"reason\": "
       "\"battery\"|\"thruster\"|\"other\"}], \"remaining_battery\": number}\n";
  return s;
}

AgentReply BackendAgent::parse_reply(const std::string& text, const Proposal& p) {
  AgentReply reply;
  std::set<std::string> offered(p.cages.begin(), p.cages.end());
  std::set<std::string> answered;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(extract_json(text));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("agent " + p.rov, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SchemaError("agent " + p.rov, "reply must be an object");
  if (j.contains("accept") && j["accept"].is_array())
    for (const auto& c : j["accept"])
      if (c.is_string() && offered.count(c.get<std::string>()) && answered.insert(c.get<std::string>()).second)
        reply.accept.push_back(c.get<std::string>());
  if (j.contains("reject") && j["reject"].is_array()) {
    for (const auto& r : j["reject"]) {
      std::string cage;
      std::string reason = "other";
      if (r.is_string()) cage = r.get<std::string>();
      else if (r.is_object() && r.contains("cage") && r["cage"].is_string()) {
        cage = r["cage"].get<std::string>();
        if (r.contains("reason") && r["reason"].is_string()) reason = text::to_lower(r["reason"].get<std::string>());
      }
      if (!offered.count(cage) || !answered.insert(cage).second) continue;
      const RejectReason kind = reason.find("thrust") != std::string::npos  ? RejectReason::Thruster
                                : reason.find("batter") != std::string::npos ? RejectReason::Battery
                                                                             : RejectReason::Other;
      reply.reject.push_back({cage, kind, reason});
    }
  }
  for (const auto& c : p.cages)
    if (!answered.count(c)) reply.reject.push_back({c, RejectReason::Other, "not answered"});
  if (j.contains("remaining_battery") && j["remaining_battery"].is_number())
    reply.remaining_battery = j["remaining_battery"].get<double>();
  return reply;
}

AgentReply BackendAgent::evaluate(const Proposal& p, const PlannerInputs& in) {
  BackendRequest req;
  req.inputs = in;
  req.prompt = build_prompt_parts(in.world, in.instruction, in.allocation, in.battery);
  req.prompt.user = agent_prompt(p, in);
  return parse_reply(backend_.generate(req), p);
}

MasResult plan_mas(const PlannerInputs& inputs, std::vector<std::unique_ptr<MasAgent>>& agents,
                   const MasOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& world = inputs.world;
  if (world.rovs.empty()) throw std::invalid_argument("multi-agent planning needs at least one ROV");
  if (agents.size() != world.rovs.size()) throw std::invalid_argument("one agent per ROV required");

  const TaskSpec spec = parse_instruction(inputs.instruction, world);
  MasResult out;
  std::map<std::string, std::vector<std::string>> held;
  std::map<std::string, double> remaining;
  for (const auto& r : world.rovs) remaining[r.id] = r.battery;
  std::map<std::string, std::map<std::string, RejectReason>> refused;  // cage -> rov -> reason
  std::map<std::string, std::string> pinned;
  for (const auto& [rov, cages] : spec.fixed)
    for (const auto& c : cages) pinned[c] = rov;
  std::vector<std::string> open = spec.requested();
  bool recharge = false;

  auto eligible = [&](const std::string& cage, const mission::RovStatus& r) {
    const auto it = refused.find(cage);
    if (it != refused.end() && it->second.count(r.id)) return false;
    const auto pin = pinned.find(cage);
    if (pin != pinned.end() && pin->second != r.id && !refused[cage].count(pin->second)) return false;
    if (pin == pinned.end() &&
        std::find(spec.pool_rovs.begin(), spec.pool_rovs.end(), r.id) == spec.pool_rovs.end())
      return false;
    return true;
  };

  auto build_offers = [&]() {
    std::map<std::string, std::vector<std::string>> offers;
    for (const auto& cage : open) {
      const mission::RovStatus* best = nullptr;
      for (const auto& r : world.rovs) {
        if (!eligible(cage, r)) continue;
        if (!best) {
          best = &r;
        } else if (recharge) {
          if (remaining[r.id] > remaining[best->id]) best = &r;
        } else if (distance_to(world, r, cage) < distance_to(world, *best, cage)) {
          best = &r;
        }
      }
      if (best) offers[best->id].push_back(cage);
    }
    return offers;
  };

  int round = 0;
  while (!open.empty()) {
    auto offers = build_offers();
    if (offers.empty() && !recharge) {
      // Battery refusals become negotiable once recharging is on the table.
      bool battery_only = false;
      for (auto& [cage, by] : refused)
        for (auto it = by.begin(); it != by.end();) {
          if (it->second == RejectReason::Battery) {
            it = by.erase(it);
            battery_only = true;
          } else {
            ++it;
          }
        }
      if (!battery_only) break;
      recharge = true;
      out.transcript.push_back("coordinator: no ROV has charge left for the remaining cages; recharging allowed");
      offers = build_offers();
    }
    if (offers.empty()) break;
    if (++round > options.max_rounds) {
      throw NegotiationDivergence(
          fmt::format("negotiation still open after {} rounds ({} cage(s) unassigned)", options.max_rounds,
                      open.size()));
    }
    std::vector<std::pair<std::string, std::future<AgentReply>>> pending;
    for (const auto& [rov, cages] : offers) {
      Proposal p{rov, cages, held[rov], recharge, round};
      out.transcript.push_back(fmt::format("coordinator -> {}: offer [{}]{}", rov, fmt::join(cages, ", "),
                                           recharge ? " (recharge allowed)" : ""));
      std::size_t idx = 0;
      while (world.rovs[idx].id != rov) ++idx;
      MasAgent* agent = agents[idx].get();
      pending.emplace_back(rov, std::async(std::launch::async, [agent, p, &inputs] {
                             return agent->evaluate(p, inputs);
                           }));
    }
    for (auto& [rov, fut] : pending) {
      const auto t_call = std::chrono::steady_clock::now();
      AgentReply reply = fut.get();
      out.backend_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t_call).count();
      ++out.backend_calls;
      for (const auto& c : reply.accept) {
        held[rov].push_back(c);
        open.erase(std::remove(open.begin(), open.end(), c), open.end());
      }
      for (const auto& r : reply.reject) refused[r.cage][rov] = r.reason;
      remaining[rov] = reply.remaining_battery;
      std::vector<std::string> rej;
      for (const auto& r : reply.reject) rej.push_back(fmt::format("{} ({})", r.cage, to_string(r.reason)));
      out.transcript.push_back(
          fmt::format("{} -> coordinator: accept [{}] reject [{}]", rov, fmt::join(reply.accept, ", "), fmt::join(rej, ", ")));
    }
  }
  out.rounds = std::max(round, 1);
  out.uncovered = open;

  TaskSpec merged;
  for (const auto& r : world.rovs)
    if (!held[r.id].empty()) merged.fixed[r.id] = tour(world, r, held[r.id]);
  out.plan = greedy_plan(world, merged, inputs.battery, GreedyOptions{});
  out.report = mission::validate_plan(out.plan, world, inputs.battery);
  out.responses.push_back(mission::serialize_plan(out.plan));
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

MasResult plan_mas(const PlannerInputs& inputs, PlanBackend& backend, const MasOptions& options) {
  std::vector<std::unique_ptr<MasAgent>> agents;
  const bool rules = dynamic_cast<HeuristicBackend*>(&backend) != nullptr;
  for (std::size_t i = 0; i < inputs.world.rovs.size(); ++i) {
    if (rules) agents.push_back(std::make_unique<RuleAgent>());
    else agents.push_back(std::make_unique<BackendAgent>(backend));
  }
  return plan_mas(inputs, agents, options);
}

}  // namespace netpen::planning
