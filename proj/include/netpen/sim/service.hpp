#pragma once

#include "netpen/mission/world.hpp"
#include "netpen/planning/backend.hpp"
#include "netpen/planning/planners.hpp"
#include "netpen/sim/executor.hpp"

#include <nlohmann/json.hpp>

#include <memory>
#include <string>

namespace netpen::sim {

struct ServiceConfig {
  mission::WorldModel world{mission::WorldModel::standard()};
  planning::BackendConfig backend;  // default for sessions that do not name one
  planning::HapOptions hap;
  ExecutorConfig executor;
};

/// HTTP/JSON service for the human-in-the-loop planner:
///   GET  /api/world                       world snapshot
///   POST /api/sessions                    {"instruction", "backend"?} -> session state (201)
///   GET  /api/sessions/{id}               plan, validation report, per-action preview polylines
///   POST /api/sessions/{id}/feedback      {"approve": true} or {"text": "..."}
///   GET  /api/sessions/{id}/trace?since=n execution rows from index n, outcomes once done
/// Errors are {"error": message} with 400 (bad request), 404 (unknown session)
/// or 409 (state conflict, e.g. approving an invalid plan).
class HapService {
 public:
  explicit HapService(ServiceConfig config);
  ~HapService();
  HapService(const HapService&) = delete;
  HapService& operator=(const HapService&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires bind().
  void listen();
  /// bind() + listen() on a background thread; returns the bound port.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// World snapshot payload.
nlohmann::json world_to_json(const mission::WorldModel& world);

/// Per-ROV polylines: straight transit segments and sampled helices.
nlohmann::json plan_preview(const mission::MissionPlan& plan, const mission::WorldModel& world,
                            const ExecutorConfig& config = {});

/// Blocking service for the CLI.
void serve_hap(const std::string& host, int port, ServiceConfig config);

}  // namespace netpen::sim
