#include "netpen/planning/llm_client.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <regex>
#include <thread>

namespace netpen::planning {

namespace {

struct Url {
  std::string origin;  // scheme://host[:port]
  std::string path;    // full path to chat/completions
};

Url split_endpoint(const std::string& endpoint) {
  static const std::regex re(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(endpoint, m, re)) throw BackendUnavailable("malformed endpoint URL '" + endpoint + "'");
  std::string path = m[2].matched ? m[2].str() : "";
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (path.size() < 17 || path.compare(path.size() - 17, 17, "/chat/completions") != 0) path += "/chat/completions";
  return {m[1].str(), path};
}

}  // namespace

LlmBackend::LlmBackend(BackendConfig config) : config_(std::move(config)) { config_.validate(); }

std::string LlmBackend::name() const { return "llm:" + config_.model; }

void LlmBackend::log_transcript(const std::string& request_body, const std::string& response_body) const {
  if (!config_.transcript_dir) return;
  std::filesystem::create_directories(*config_.transcript_dir);
  const int n = ++transcript_counter_;
  text::write_file(*config_.transcript_dir / fmt::format("call_{:04d}.json", n),
                   fmt::format("{{\"request\": {},\n\"response\": {}}}\n", request_body,
                               nlohmann::json(response_body).dump()));
}

std::string LlmBackend::generate(const BackendRequest& request) {
  if (config_.endpoint.empty()) throw BackendUnavailable("no LLM endpoint configured (set NETPEN_LLM_ENDPOINT)");
  const Url url = split_endpoint(config_.endpoint);

  nlohmann::json messages = nlohmann::json::array();
  messages.push_back({{"role", "system"}, {"content", request.prompt.system}});
  messages.push_back({{"role", "user"}, {"content", request.prompt.user}});
  for (const auto& t : request.history) messages.push_back({{"role", t.role}, {"content", t.content}});
  const nlohmann::json body{
      {"model", config_.model}, {"temperature", config_.temperature}, {"messages", messages}};
  const std::string payload = body.dump();

  httplib::Client client(url.origin);
  const auto timeout = std::chrono::duration<double>(config_.timeout_s);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  const auto start = std::chrono::steady_clock::now();
  std::string last_error;
  bool timed_out = false;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0)
      std::this_thread::sleep_for(std::chrono::duration<double>(config_.backoff_s * std::pow(2.0, attempt - 1)));
    auto res = client.Post(url.path, headers, payload, "application/json");
    if (!res) {
      timed_out = res.error() == httplib::Error::Read || res.error() == httplib::Error::ConnectionTimeout;
      last_error = httplib::to_string(res.error());
      continue;
    }
    timed_out = false;
    if (res->status == 429 || res->status >= 500) {
      last_error = fmt::format("HTTP {}", res->status);
      continue;
    }
    if (res->status != 200) {
      log_transcript(payload, res->body);
      throw BackendUnavailable(fmt::format("LLM endpoint answered HTTP {}: {}", res->status, res->body));
    }
    log_transcript(payload, res->body);
    try {
      const auto reply = nlohmann::json::parse(res->body);
      std::string content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      last_latency_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return content;
    } catch (const nlohmann::json::exception& e) {
      throw BackendUnavailable(std::string("malformed chat-completions reply: ") + e.what());
    }
  }
  const std::string what =
      fmt::format("LLM endpoint failed after {} attempt(s): {}", config_.max_retries + 1, last_error);
  if (timed_out) throw BackendTimeout(what);
  throw BackendUnavailable(what);
}

}  // namespace netpen::planning
