#pragma once

#include "netpen/planning/backend.hpp"

#include <atomic>

namespace netpen::planning {

/// Chat-completions client. System turn = prompt.system, first user turn =
/// prompt.user, then the request history. Retries connection failures, 429 and
/// 5xx with exponential backoff; other HTTP errors fail at once.
class LlmBackend : public PlanBackend {
 public:
  explicit LlmBackend(BackendConfig config);
  std::string generate(const BackendRequest& request) override;
  std::string name() const override;

  /// Seconds spent in the last successful call, including retries.
  double last_latency() const { return last_latency_.load(); }

 private:
  void log_transcript(const std::string& request_body, const std::string& response_body) const;

  BackendConfig config_;
  std::atomic<double> last_latency_{0.0};
  mutable std::atomic<int> transcript_counter_{0};
};

}  // namespace netpen::planning
