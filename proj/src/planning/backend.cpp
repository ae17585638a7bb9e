#include "netpen/planning/backend.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"
#include "netpen/planning/instruction.hpp"
#include "netpen/planning/llm_client.hpp"

#include <cstdlib>

namespace netpen::planning {

std::string_view to_string(FeedbackSource source) {
  switch (source) {
    case FeedbackSource::Human: return "human";
    case FeedbackSource::Validator: return "validator";
    case FeedbackSource::Agent: return "agent";
  }
  return "?";
}

BackendRequest make_request(const PlannerInputs& inputs) {
  BackendRequest r;
  r.inputs = inputs;
  r.prompt = build_prompt_parts(inputs.world, inputs.instruction, inputs.allocation, inputs.battery);
  return r;
}

GreedyOptions HeuristicBackend::effective_options(const BackendRequest& request) const {
  GreedyOptions o = options_;
  for (const auto& f : request.feedback) {
    const std::string t = text::to_lower(f.text);
    auto has = [&](const char* w) { return t.find(w) != std::string::npos; };
    if ((has("dock") || has("recharg")) && (has("battery") || has("recharg") || has("intermediate")))
      o.insert_recharge = true;
    if (has("thruster")) o.gate_thrusters = true;
  }
  return o;
}

std::string HeuristicBackend::generate(const BackendRequest& request) {
  const auto& in = request.inputs;
  const TaskSpec spec = parse_instruction(in.instruction, in.world);
  return mission::serialize_plan(greedy_plan(in.world, spec, in.battery, effective_options(request)));
}

std::string HeuristicBackend::name() const {
  return options_.insert_recharge && options_.gate_thrusters ? "deterministic" : "naive";
}

ScriptedBackend::ScriptedBackend(std::vector<std::string> responses, bool cycle)
    : responses_(std::move(responses)), cycle_(cycle) {
  if (responses_.empty()) throw std::invalid_argument("scripted backend needs at least one response");
}

std::string ScriptedBackend::generate(const BackendRequest&) {
  std::lock_guard lock(mutex_);
  const std::size_t i = cycle_ ? calls_ % responses_.size() : std::min(calls_, responses_.size() - 1);
  ++calls_;
  return responses_[i];
}

std::size_t ScriptedBackend::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

void BackendConfig::validate() const {
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
  if (!(backoff_s >= 0.0)) throw std::invalid_argument("backoff must be non-negative");
  if (!(temperature >= 0.0)) throw std::invalid_argument("temperature must be non-negative");
}

BackendConfig BackendConfig::from_env(BackendKind kind) {
  BackendConfig c;
  c.kind = kind;
  if (const char* e = std::getenv("NETPEN_LLM_ENDPOINT")) c.endpoint = e;
  if (const char* k = std::getenv("NETPEN_LLM_API_KEY")) c.api_key = k;
  if (const char* m = std::getenv("NETPEN_LLM_MODEL")) c.model = m;
  return c;
}

BackendKind parse_backend_kind(std::string_view text) {
  const std::string t = text::to_lower(text);
  if (t == "llm" || t == "remote-llm" || t == "remote") return BackendKind::RemoteLlm;
  if (t == "deterministic" || t == "heuristic") return BackendKind::Deterministic;
  if (t == "naive") return BackendKind::Naive;
  throw std::invalid_argument("unknown backend '" + std::string(text) + "'");
}

std::unique_ptr<PlanBackend> make_backend(const BackendConfig& config) {
  config.validate();
  switch (config.kind) {
    case BackendKind::RemoteLlm: return std::make_unique<LlmBackend>(config);
    case BackendKind::Deterministic: return std::make_unique<HeuristicBackend>();
    case BackendKind::Naive: return std::make_unique<HeuristicBackend>(GreedyOptions{false, false});
  }
  throw std::invalid_argument("unknown backend kind");
}

std::string extract_json(std::string_view text) {
  const auto fence = text.find("```");
  if (fence != std::string_view::npos) {
    auto body = text.find('\n', fence);
    const auto close = body == std::string_view::npos ? body : text.find("```", body);
    if (close != std::string_view::npos) return std::string(text::trim(text.substr(body + 1, close - body - 1)));
  }
  const auto open = text.find('{');
  if (open == std::string_view::npos) throw SchemaError("", "no JSON object in backend response");
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) escaped = false;
      else if (c == '\\') escaped = true;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '{') ++depth;
    else if (c == '}' && --depth == 0) return std::string(text.substr(open, i - open + 1));
  }
  throw SchemaError("", "unbalanced JSON object in backend response");
}

}  // namespace netpen::planning
