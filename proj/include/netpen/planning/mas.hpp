#pragma once

#include "netpen/planning/planners.hpp"

#include <memory>
#include <string>
#include <vector>

namespace netpen::planning {

enum class RejectReason { Battery, Thruster, Other };

std::string_view to_string(RejectReason reason);

struct Proposal {
  std::string rov;
  std::vector<std::string> cages;     // newly offered cages
  std::vector<std::string> accepted;  // cages this ROV already holds
  bool recharge_allowed{false};
  int round{1};
};

struct Rejection {
  std::string cage;
  RejectReason reason{RejectReason::Other};
  std::string text;
};

struct AgentReply {
  std::vector<std::string> accept;
  std::vector<Rejection> reject;
  double remaining_battery{0.0};  // estimate after all accepted cages, before recharging
};

/// A per-ROV planning agent with its own context.
class MasAgent {
 public:
  virtual ~MasAgent() = default;
  virtual AgentReply evaluate(const Proposal& proposal, const PlannerInputs& inputs) = 0;
};

/// Checks the offer against its own thrusters and battery: refuses everything
/// when it fails the controllability check, and otherwise takes nearest cages
/// first while the battery stays at or above the critical level (any number
/// once recharging is allowed).
class RuleAgent : public MasAgent {
 public:
  AgentReply evaluate(const Proposal& proposal, const PlannerInputs& inputs) override;
};

/// Asks a backend for an accept/reject JSON verdict on the offer.
class BackendAgent : public MasAgent {
 public:
  explicit BackendAgent(PlanBackend& backend) : backend_(backend) {}
  AgentReply evaluate(const Proposal& proposal, const PlannerInputs& inputs) override;

  static std::string agent_prompt(const Proposal& proposal, const PlannerInputs& inputs);
  /// Parses {"accept": [...], "reject": [{"cage", "reason"}], "remaining_battery": n}.
  /// Cages the reply does not mention count as rejected.
  static AgentReply parse_reply(const std::string& text, const Proposal& proposal);

 private:
  PlanBackend& backend_;
};

struct MasOptions {
  int max_rounds{4};
};

struct MasResult : PlanningResult {
  std::vector<std::string> uncovered;  // requested cages no ROV could take
  std::vector<std::string> transcript;  // coordinator/agent messages
};

/// Coordinator proposes a partition (nearest ROV per cage), agents accept or
/// reject with reasons, rejected cages are re-offered to other ROVs; when only
/// battery stands in the way the coordinator allows recharging and offers each
/// cage to the ROV with the most charge left. The merged assignment is turned
/// into a plan (alternating directions, recharge docks, distinct final stations)
/// and validated globally. Throws NegotiationDivergence when offers remain after
/// the round cap.
MasResult plan_mas(const PlannerInputs& inputs, std::vector<std::unique_ptr<MasAgent>>& agents,
                   const MasOptions& options = {});

/// Rule agents for heuristic backends, backend agents otherwise.
MasResult plan_mas(const PlannerInputs& inputs, PlanBackend& backend, const MasOptions& options = {});

}  // namespace netpen::planning
