#pragma once

#include "netpen/allocation/allocation_matrix.hpp"
#include "netpen/mission/validator.hpp"
#include "netpen/mission/world.hpp"
#include "netpen/planning/greedy.hpp"
#include "netpen/planning/prompt.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace netpen::planning {

struct PlannerInputs {
  mission::WorldModel world;
  std::string instruction;
  mission::BatteryModel battery;
  Matrix6d allocation{allocation::standard_allocation_matrix<double>()};
};

enum class FeedbackSource { Human, Validator, Agent };

std::string_view to_string(FeedbackSource source);

struct FeedbackMessage {
  FeedbackSource source{FeedbackSource::Human};
  std::string text;
  std::optional<mission::ValidationReport> report;
};

struct ChatTurn {
  std::string role;  // "assistant" or "user"
  std::string content;
};

struct BackendRequest {
  PlannerInputs inputs;
  PromptParts prompt;
  /// Earlier plans and corrections, oldest first, following the first user turn.
  std::vector<ChatTurn> history;
  std::vector<FeedbackMessage> feedback;
};

BackendRequest make_request(const PlannerInputs& inputs);

/// Turns a request into raw model text (expected to contain the plan JSON).
class PlanBackend {
 public:
  virtual ~PlanBackend() = default;
  virtual std::string generate(const BackendRequest& request) = 0;
  virtual std::string name() const = 0;
};

/// Greedy planner behind the backend interface. Corrective feedback that
/// mentions docking/recharging or thrusters switches on the matching
/// safeguard, which lets scripted human loops repair a naive first plan.
class HeuristicBackend : public PlanBackend {
 public:
  explicit HeuristicBackend(GreedyOptions options = {}) : options_(options) {}
  std::string generate(const BackendRequest& request) override;
  std::string name() const override;

  /// Options after applying the feedback in `request`.
  GreedyOptions effective_options(const BackendRequest& request) const;

 private:
  GreedyOptions options_;
};

/// Replays canned responses in order; the last one repeats unless `cycle` is set.
class ScriptedBackend : public PlanBackend {
 public:
  explicit ScriptedBackend(std::vector<std::string> responses, bool cycle = false);
  std::string generate(const BackendRequest& request) override;
  std::string name() const override { return "scripted"; }
  std::size_t calls() const;

 private:
  std::vector<std::string> responses_;
  bool cycle_;
  mutable std::mutex mutex_;
  std::size_t calls_{0};
};

class FunctionBackend : public PlanBackend {
 public:
  using Fn = std::function<std::string(const BackendRequest&)>;
  FunctionBackend(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
  std::string generate(const BackendRequest& request) override { return fn_(request); }
  std::string name() const override { return name_; }

 private:
  std::string name_;
  Fn fn_;
};

enum class BackendKind { RemoteLlm, Deterministic, Naive };

struct BackendConfig {
  BackendKind kind{BackendKind::Deterministic};
  std::string endpoint;  // base URL of an OpenAI-compatible API
  std::string api_key;
  std::string model{"gpt-4o"};
  double temperature{0.0};
  int max_retries{2};
  double timeout_s{60.0};
  double backoff_s{0.5};  // first retry delay, doubled per attempt
  std::optional<std::filesystem::path> transcript_dir;

  void validate() const;
  /// Fills endpoint, key and model from NETPEN_LLM_ENDPOINT, NETPEN_LLM_API_KEY, NETPEN_LLM_MODEL.
  static BackendConfig from_env(BackendKind kind = BackendKind::RemoteLlm);
};

BackendKind parse_backend_kind(std::string_view text);
std::unique_ptr<PlanBackend> make_backend(const BackendConfig& config);

/// First fenced code block, else the first brace-balanced span. Throws SchemaError.
std::string extract_json(std::string_view text);

}  // namespace netpen::planning
