#include "netpen/planning/planners.hpp"

#include <fmt/format.h>

#include <chrono>
#include <istream>
#include <ostream>
#include <set>

namespace netpen::planning {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string call_backend(PlanBackend& backend, const BackendRequest& request, PlanningResult& out) {
  const auto t0 = Clock::now();
  std::string text = backend.generate(request);
  out.backend_seconds += seconds_since(t0);
  ++out.backend_calls;
  out.responses.push_back(text);
  return text;
}

}  // namespace

void parse_and_validate(const std::string& response, const PlannerInputs& inputs, PlanningResult& out) {
  try {
    out.plan = mission::parse_plan(extract_json(response));
    out.report = mission::validate_plan(out.plan, inputs.world, inputs.battery);
  } catch (const SchemaError& e) {
    out.plan = {};
    out.report = mission::ValidationReport::schema_failure(e);
  }
}

PlanningResult plan_clp(const PlannerInputs& inputs, PlanBackend& backend) {
  const auto t0 = Clock::now();
  PlanningResult out;
  out.rounds = 1;
  parse_and_validate(call_backend(backend, make_request(inputs), out), inputs, out);
  out.wall_seconds = seconds_since(t0);
  return out;
}

ChannelReply ScriptedChannel::review(const mission::MissionPlan&, const mission::ValidationReport&, int) {
  if (next_ >= replies_.size()) throw ChannelClosed("scripted feedback channel has no more replies");
  return replies_[next_++];
}

std::string corrective_feedback(const mission::ValidationReport& report) {
  std::vector<std::string> lines;
  std::set<std::string> said;
  auto say = [&](std::string s) {
    if (said.insert(s).second) lines.push_back(std::move(s));
  };
  for (const auto& d : report.diagnostics) {
    const std::string who = d.rov.empty() ? "The plan" : d.rov;
    switch (d.kind) {
      case mission::DiagnosticKind::BatteryViolation:
        say(fmt::format("{} battery too low: add intermediate docking to recharge before it drops below the "
                        "critical level, then complete the task.",
                        who));
        break;
      case mission::DiagnosticKind::ThrusterInfeasible:
        say(fmt::format("{} thrusters cannot control surge, sway, heave and yaw: skip its inspections and dock "
                        "immediately for repairs.",
                        who));
        break;
      case mission::DiagnosticKind::DistanceRuleViolation:
        say(fmt::format("{} must inspect from exactly 3 m off the cage center.", who));
        break;
      case mission::DiagnosticKind::DockingMissing:
        say(fmt::format("{} must finish at a docking station.", who));
        break;
      case mission::DiagnosticKind::SchemaError:
        say(fmt::format("Fix the plan format: {}", d.message));
        break;
    }
  }
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

ChannelReply OperatorChannel::review(const mission::MissionPlan&, const mission::ValidationReport& report, int) {
  if (report.valid()) return ChannelReply::approved();
  return ChannelReply::revise(corrective_feedback(report));
}

ChannelReply ConsoleChannel::review(const mission::MissionPlan& plan, const mission::ValidationReport& report,
                                    int round) {
  out_ << fmt::format("--- round {} ---\n", round) << mission::serialize_plan(plan)
       << mission::format_report(report) << "Type 'approve' or a correction: " << std::flush;
  std::string line;
  if (!std::getline(in_, line)) throw ChannelClosed("console input closed");
  if (line == "approve" || line == "a" || line == "yes" || line == "y") return ChannelReply::approved();
  return ChannelReply::revise(line);
}

HapSession::HapSession(PlannerInputs inputs, PlanBackend& backend, HapOptions options)
    : inputs_(std::move(inputs)), backend_(backend), options_(options), request_(make_request(inputs_)) {
  if (options_.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
}

void HapSession::generate() {
  ++result_.rounds;
  last_text_ = call_backend(backend_, request_, result_);
  parse_and_validate(last_text_, inputs_, result_);
}

const PlanningResult& HapSession::start() {
  if (result_.rounds != 0) throw std::logic_error("HapSession::start called twice");
  generate();
  return result_;
}

bool HapSession::submit(const ChannelReply& reply) {
  if (result_.rounds == 0) throw std::logic_error("HapSession::submit before start");
  if (approved_) return true;
  if (reply.approve && result_.report.valid()) return approved_ = true;
  if (result_.rounds >= options_.max_rounds) throw RoundLimitExceeded(result_.rounds, result_);
  FeedbackMessage fb;
  if (reply.approve) {
    fb = {FeedbackSource::Validator, mission::format_report(result_.report), result_.report};
  } else {
    fb = {FeedbackSource::Human, reply.text, result_.report};
  }
  std::string turn = "Validator output:\n" + mission::format_report(result_.report);
  if (fb.source == FeedbackSource::Human) turn += "\nOperator feedback:\n" + fb.text;
  turn += "\nRevise the plan and return the complete JSON again.";
  request_.history.push_back({"assistant", last_text_});
  request_.history.push_back({"user", turn});
  request_.feedback.push_back(std::move(fb));
  generate();
  return false;
}

PlanningResult plan_hap(const PlannerInputs& inputs, PlanBackend& backend, FeedbackChannel& channel,
                        const HapOptions& options) {
  const auto t0 = Clock::now();
  HapSession session(inputs, backend, options);
  session.start();
  try {
    while (!session.submit(channel.review(session.result().plan, session.result().report, session.round()))) {
    }
  } catch (const RoundLimitExceeded& e) {
    PlanningResult last = e.last();
    last.wall_seconds = seconds_since(t0);
    throw RoundLimitExceeded(last.rounds, std::move(last));
  }
  PlanningResult out = session.result();
  out.wall_seconds = seconds_since(t0);
  return out;
}

}  // namespace netpen::planning
