#include "netpen/sim/service.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/guidance/helix.hpp"
#include "netpen/mission/validator.hpp"

#include <fmt/format.h>
#include <httplib.h>

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace netpen::sim {

using nlohmann::json;

namespace {

json point(const Vector3d& p) { return json::array({p.x(), p.y(), p.z()}); }

json plan_to_json(const mission::MissionPlan& plan) { return json::parse(mission::serialize_plan(plan)); }

json row_to_json(const std::string& rov, const TraceRow& r) {
  std::vector<double> thrust(r.thrust.data(), r.thrust.data() + 6);
  return {{"rov", rov},         {"t", r.t},           {"action", r.action},
          {"position", point(r.position)}, {"yaw", r.yaw}, {"thrust", thrust},
          {"battery", r.battery}, {"error", std::vector<double>(r.error.data(), r.error.data() + 4)}};
}

json outcomes_to_json(const ExecutionTrace& trace) {
  json out = json::object();
  for (const auto& r : trace.rovs) {
    json list = json::array();
    for (const auto& o : r.outcomes)
      list.push_back({{"index", o.index},
                      {"kind", mission::to_string(o.kind)},
                      {"target", o.target},
                      {"status", to_string(o.status)},
                      {"reason", o.reason},
                      {"t_start", o.t_start},
                      {"t_end", o.t_end},
                      {"battery_after", o.battery_after}});
    out[r.rov] = {{"completed", r.completed()}, {"duration", r.duration}, {"outcomes", list},
                  {"battery_trace", r.battery_trace}};
  }
  return out;
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

struct Session {
  std::mutex mutex;
  std::string id;
  std::string instruction;
  std::string backend_name;
  std::unique_ptr<planning::PlanBackend> backend;
  std::unique_ptr<planning::HapSession> hap;
  std::string status{"awaiting_feedback"};  // executing, completed, failed
  std::string error;
  std::vector<std::pair<std::string, TraceRow>> rows;
  std::optional<ExecutionTrace> trace;
  std::thread worker;
};

}  // namespace

json world_to_json(const mission::WorldModel& world) {
  json cages = json::array(), stations = json::array(), rovs = json::array();
  for (const auto& c : world.cages)
    cages.push_back({{"id", c.id},
                     {"center", {c.center.x(), c.center.y()}},
                     {"radius", c.radius},
                     {"top", c.z_top},
                     {"bottom", c.z_bottom}});
  for (const auto& s : world.stations) stations.push_back({{"id", s.id}, {"position", {s.position.x(), s.position.y()}}});
  for (const auto& r : world.rovs) {
    const auto& d = r.degradation.values();
    rovs.push_back({{"id", r.id},
                    {"position", point(r.position)},
                    {"battery", r.battery},
                    {"failed_thrusters", r.failed_thrusters()},
                    {"degradation", std::vector<double>(d.data(), d.data() + 6)}});
  }
  return {{"cages", cages}, {"stations", stations}, {"rovs", rovs}};
}

json plan_preview(const mission::MissionPlan& plan, const mission::WorldModel& world, const ExecutorConfig& config) {
  json out = json::object();
  for (const auto& p : plan.rovs) {
    const auto* rov = world.find_rov(p.rov_id);
    Vector3d here = rov ? rov->position : Vector3d::Zero();
    Vector3d offset = here;
    json segments = json::array();
    for (std::size_t i = 0; i < p.actions.size(); ++i) {
      const auto& a = p.actions[i];
      json pts = json::array({point(here)});
      if (a.kind == mission::ActionKind::MoveTo) {
        here = offset = a.position;
        pts.push_back(point(here));
      } else if (const auto* cage = world.find_cage(a.target)) {
        const Vector2d rel = offset.head<2>() - cage->center;
        const double theta0 = rel.norm() > 1e-9 ? std::atan2(rel.y(), rel.x()) : 0.0;
        const auto spec = guidance::HelixSpec::for_cage(*cage, a.direction, theta0, a.distance, config.helix_turns,
                                                        config.helix_duration);
        for (const auto& s : guidance::helix_trajectory(spec, spec.duration / 100.0)) pts.push_back(point(s.position));
        here = guidance::helix_sample(spec, spec.duration).position;
      }
      segments.push_back(
          {{"action", i}, {"kind", mission::to_string(a.kind)}, {"target", a.target}, {"points", pts}});
    }
    out[p.rov_id] = segments;
  }
  return out;
}

struct HapService::Impl {
  ServiceConfig config;
  httplib::Server server;
  std::thread thread;
  std::mutex sessions_mutex;
  std::map<std::string, std::shared_ptr<Session>> sessions;
  std::atomic<int> next_id{1};

  explicit Impl(ServiceConfig c) : config(std::move(c)) { routes(); }

  ~Impl() {
    server.stop();
    if (thread.joinable()) thread.join();
    std::lock_guard<std::mutex> lock(sessions_mutex);
    for (auto& [id, s] : sessions)
      if (s->worker.joinable()) s->worker.join();
  }

  std::shared_ptr<Session> find(const std::string& id) {
    std::lock_guard<std::mutex> lock(sessions_mutex);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  // Caller holds s.mutex.
  json state(const Session& s) const {
    json j{{"id", s.id},         {"instruction", s.instruction}, {"backend", s.backend_name},
           {"status", s.status}, {"round", s.hap->round()}};
    const auto& r = s.hap->result();
    j["plan"] = r.plan.rovs.empty() ? json() : plan_to_json(r.plan);
    j["report"] = mission::report_to_json(r.report);
    j["report_text"] = mission::format_report(r.report);
    j["valid"] = r.report.valid();
    j["preview"] = plan_preview(r.plan, config.world, config.executor);
    j["trace_rows"] = s.rows.size();
    if (!s.error.empty()) j["error"] = s.error;
    return j;
  }

  void execute(const std::shared_ptr<Session>& s) {
    ExecutorConfig exec = config.executor;
    std::weak_ptr<Session> weak = s;
    exec.on_row = [weak](const std::string& rov, const TraceRow& row) {
      if (auto locked = weak.lock()) {
        std::lock_guard<std::mutex> lock(locked->mutex);
        locked->rows.emplace_back(rov, row);
      }
    };
    const mission::MissionPlan plan = s->hap->result().plan;
    s->worker = std::thread([this, s, plan, exec] {
      std::optional<ExecutionTrace> trace;
      std::string error;
      try {
        trace = execute_plan(plan, config.world, exec);
      } catch (const std::exception& e) {
        error = e.what();
      }
      std::lock_guard<std::mutex> lock(s->mutex);
      s->trace = std::move(trace);
      s->error = error;
      s->status = error.empty() ? "completed" : "failed";
    });
  }

  void routes() {
    server.Get("/api/world", [this](const httplib::Request&, httplib::Response& res) {
      send_json(res, 200, world_to_json(config.world));
    });

    server.Post("/api/sessions", [this](const httplib::Request& req, httplib::Response& res) {
      json body;
      try {
        body = json::parse(req.body.empty() ? "{}" : req.body);
      } catch (const json::exception&) {
        return send_error(res, 400, "request body is not JSON");
      }
      if (!body.is_object() || !body.contains("instruction") || !body["instruction"].is_string())
        return send_error(res, 400, "expected {\"instruction\": string}");
      planning::BackendConfig backend = config.backend;
      try {
        if (body.contains("backend")) backend.kind = planning::parse_backend_kind(body["backend"].get<std::string>());
      } catch (const std::exception& e) {
        return send_error(res, 400, e.what());
      }
      auto s = std::make_shared<Session>();
      s->id = std::to_string(next_id++);
      s->instruction = body["instruction"].get<std::string>();
      try {
        s->backend = planning::make_backend(backend);
        s->backend_name = s->backend->name();
        planning::PlannerInputs in;
        in.world = config.world;
        in.instruction = s->instruction;
        s->hap = std::make_unique<planning::HapSession>(in, *s->backend, config.hap);
        s->hap->start();
      } catch (const std::exception& e) {
        return send_error(res, 502, std::string("planner backend failed: ") + e.what());
      }
      {
        std::lock_guard<std::mutex> lock(sessions_mutex);
        sessions[s->id] = s;
      }
      std::lock_guard<std::mutex> lock(s->mutex);
      send_json(res, 201, state(*s));
    });

    server.Get(R"(/api/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      if (!s) return send_error(res, 404, "session not found");
      std::lock_guard<std::mutex> lock(s->mutex);
      send_json(res, 200, state(*s));
    });

    server.Post(R"(/api/sessions/([^/]+)/feedback)", [this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      if (!s) return send_error(res, 404, "session not found");
      json body;
      try {
        body = json::parse(req.body);
      } catch (const json::exception&) {
        return send_error(res, 400, "request body is not JSON");
      }
      const bool approve = body.is_object() && body.value("approve", false);
      const bool has_text = body.is_object() && body.contains("text") && body["text"].is_string() &&
                            !body["text"].get<std::string>().empty();
      if (!approve && !has_text) return send_error(res, 400, "expected {\"approve\": true} or {\"text\": string}");
      std::lock_guard<std::mutex> lock(s->mutex);
      if (s->status != "awaiting_feedback") return send_error(res, 409, "session is " + s->status);
      if (approve) {
        if (!s->hap->result().report.valid())
          return send_error(res, 409, "plan is not valid:\n" + mission::format_report(s->hap->result().report));
        s->hap->submit(planning::ChannelReply::approved());
        s->status = "executing";
        execute(s);
        return send_json(res, 200, state(*s));
      }
      try {
        s->hap->submit(planning::ChannelReply::revise(body["text"].get<std::string>()));
      } catch (const planning::RoundLimitExceeded& e) {
        s->status = "failed";
        s->error = e.what();
      } catch (const std::exception& e) {
        return send_error(res, 502, std::string("planner backend failed: ") + e.what());
      }
      send_json(res, 200, state(*s));
    });

    server.Get(R"(/api/sessions/([^/]+)/trace)", [this](const httplib::Request& req, httplib::Response& res) {
      auto s = find(req.matches[1]);
      if (!s) return send_error(res, 404, "session not found");
      std::size_t since = 0;
      if (req.has_param("since")) {
        try {
          since = static_cast<std::size_t>(std::stoul(req.get_param_value("since")));
        } catch (const std::exception&) {
          return send_error(res, 400, "since must be a non-negative integer");
        }
      }
      std::lock_guard<std::mutex> lock(s->mutex);
      if (s->status == "awaiting_feedback") return send_error(res, 409, "plan not approved yet");
      json rows = json::array();
      for (std::size_t i = since; i < s->rows.size(); ++i) rows.push_back(row_to_json(s->rows[i].first, s->rows[i].second));
      json j{{"status", s->status}, {"rows", rows}, {"next", s->rows.size()}, {"done", s->status != "executing"}};
      if (s->trace) {
        j["outcomes"] = outcomes_to_json(*s->trace);
        j["completed"] = s->trace->completed();
      }
      send_json(res, 200, j);
    });

    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send_error(res, 500, what);
    });
  }
};

HapService::HapService(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

HapService::~HapService() = default;

int HapService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  return port;
}

void HapService::listen() { impl_->server.listen_after_bind(); }

int HapService::start(const std::string& host, int port) {
  const int bound = bind(host, port);
  if (bound <= 0) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HapService::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void serve_hap(const std::string& host, int port, ServiceConfig config) {
  HapService service(std::move(config));
  const int bound = service.bind(host, port);
  if (bound <= 0) throw std::runtime_error(fmt::format("cannot bind {}:{}", host, port));
  fmt::print("HAP service listening on http://{}:{}\n", host, bound);
  std::fflush(stdout);
  service.listen();
}

}  // namespace netpen::sim
