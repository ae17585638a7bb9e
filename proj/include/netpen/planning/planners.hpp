#pragma once

#include "netpen/core/errors.hpp"
#include "netpen/mission/plan.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/planning/backend.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace netpen::planning {

struct PlanningResult {
  mission::MissionPlan plan;
  mission::ValidationReport report;
  int rounds{0};
  int backend_calls{0};
  double backend_seconds{0.0};  // time inside backend calls
  double wall_seconds{0.0};     // includes channel (human) time
  std::vector<std::string> responses;  // raw backend text per call
};

/// Parses backend text (JSON extraction + strict parse) and validates it.
/// A malformed response yields an empty plan and a SchemaError report.
void parse_and_validate(const std::string& response, const PlannerInputs& inputs, PlanningResult& out);

/// Single backend call, parse, validate. No retry.
PlanningResult plan_clp(const PlannerInputs& inputs, PlanBackend& backend);

struct ChannelReply {
  bool approve{false};
  std::string text;

  static ChannelReply approved() { return {true, {}}; }
  static ChannelReply revise(std::string text) { return {false, std::move(text)}; }
};

/// The human side of the adaptive planner.
class FeedbackChannel {
 public:
  virtual ~FeedbackChannel() = default;
  virtual ChannelReply review(const mission::MissionPlan& plan, const mission::ValidationReport& report,
                              int round) = 0;
};

/// Replays fixed replies; throws ChannelClosed when they run out.
class ScriptedChannel : public FeedbackChannel {
 public:
  explicit ScriptedChannel(std::vector<ChannelReply> replies) : replies_(std::move(replies)) {}
  ChannelReply review(const mission::MissionPlan&, const mission::ValidationReport&, int round) override;
  std::size_t reviews() const { return next_; }

 private:
  std::vector<ChannelReply> replies_;
  std::size_t next_{0};
};

/// Simulated operator: approves valid plans, otherwise writes a correction
/// from the validator diagnostics (battery -> add intermediate docking,
/// thrusters -> dock immediately for repairs, ...).
class OperatorChannel : public FeedbackChannel {
 public:
  ChannelReply review(const mission::MissionPlan& plan, const mission::ValidationReport& report, int round) override;
};

/// Terminal session: prints plan and report, reads "approve" or a correction.
class ConsoleChannel : public FeedbackChannel {
 public:
  ConsoleChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  ChannelReply review(const mission::MissionPlan& plan, const mission::ValidationReport& report, int round) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Operator correction text for a report (empty when valid).
std::string corrective_feedback(const mission::ValidationReport& report);

class RoundLimitExceeded : public Error {
 public:
  RoundLimitExceeded(int rounds, PlanningResult last)
      : Error("adaptive planner reached its round limit (" + std::to_string(rounds) + ") without an approved valid plan"),
        last_(std::move(last)) {}
  const PlanningResult& last() const { return last_; }
  const mission::ValidationReport& report() const { return last_.report; }

 private:
  PlanningResult last_;
};

struct HapOptions {
  int max_rounds{5};
};

/// Step-wise adaptive planning loop for callers that receive operator replies
/// asynchronously. plan_hap drives one from a FeedbackChannel.
class HapSession {
 public:
  HapSession(PlannerInputs inputs, PlanBackend& backend, HapOptions options = {});

  /// First backend call. Call once before submit().
  const PlanningResult& start();
  /// Applies an operator reply. Returns true once a valid plan is approved;
  /// otherwise re-plans with the feedback appended. Throws RoundLimitExceeded.
  bool submit(const ChannelReply& reply);

  const PlanningResult& result() const { return result_; }
  const PlannerInputs& inputs() const { return inputs_; }
  const BackendRequest& request() const { return request_; }
  int round() const { return result_.rounds; }
  bool approved() const { return approved_; }

 private:
  void generate();

  PlannerInputs inputs_;
  PlanBackend& backend_;
  HapOptions options_;
  BackendRequest request_;
  PlanningResult result_;
  std::string last_text_;
  bool approved_{false};
};

/// Generate, validate, present over the channel; on a correction re-invoke the
/// backend with the earlier plan and the feedback appended. Ends when a valid
/// plan is approved. Approving an invalid plan sends the validator output back
/// instead.
PlanningResult plan_hap(const PlannerInputs& inputs, PlanBackend& backend, FeedbackChannel& channel,
                        const HapOptions& options = {});

}  // namespace netpen::planning
