#include "netpen/mission/plan.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <nlohmann/json.hpp>

#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <variant>

namespace netpen::mission {

std::string_view to_string(ActionKind kind) {
  return kind == ActionKind::MoveTo ? "move_to" : "inspect_net";
}

PlanAction PlanAction::move_to(std::string target, const Vector3d& position) {
  PlanAction a;
  a.kind = ActionKind::MoveTo;
  a.target = std::move(target);
  a.position = position;
  return a;
}

PlanAction PlanAction::inspect_net(std::string target, guidance::Direction direction, double distance) {
  PlanAction a;
  a.kind = ActionKind::InspectNet;
  a.target = std::move(target);
  a.direction = direction;
  a.distance = distance;
  return a;
}

std::optional<double> RovPlan::declared_battery() const {
  auto s = text::trim(battery_status);
  if (!s.empty() && s.back() == '%') s = text::trim(s.substr(0, s.size() - 1));
  if (s.empty()) return std::nullopt;
  try {
    return text::parse_double(s, "BatteryStatus");
  } catch (const SchemaError&) {
    return std::nullopt;
  }
}

const RovPlan* MissionPlan::find(std::string_view rov_id) const {
  for (const auto& r : rovs)
    if (r.rov_id == rov_id) return &r;
  return nullptr;
}

RovPlan* MissionPlan::find(std::string_view rov_id) {
  for (auto& r : rovs)
    if (r.rov_id == rov_id) return &r;
  return nullptr;
}

namespace {

using Value = std::variant<std::string, double>;

// Recursive-descent reader for the call grammar:
//   call  := ident '(' str ',' dict ')'
//   dict  := '{' [ str ':' value { ',' str ':' value } ] '}'
//   value := str | number
class CallReader {
 public:
  CallReader(std::string_view text, std::string location) : s_(text), loc_(std::move(location)) {}

  std::string identifier() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (pos_ == start) fail("expected a function name");
    return std::string(s_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != c) fail(fmt::format("expected '{}'", c));
    ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string string_literal() {
    skip_ws();
    if (pos_ >= s_.size() || (s_[pos_] != '\'' && s_[pos_] != '"')) fail("expected a quoted string");
    const char quote = s_[pos_++];
    const std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != quote) ++pos_;
    if (pos_ >= s_.size()) fail("unterminated string");
    std::string out(s_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  Value value() {
    skip_ws();
    if (pos_ < s_.size() && (s_[pos_] == '\'' || s_[pos_] == '"')) return string_literal();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-' ||
                                s_[pos_] == '+' || s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      ++pos_;
    if (pos_ == start) fail("expected a number or string");
    const double v = text::parse_double(s_.substr(start, pos_ - start), loc_);
    if (!std::isfinite(v)) fail("non-finite number");
    return v;
  }

  std::map<std::string, Value> dict() {
    std::map<std::string, Value> out;
    expect('{');
    if (accept('}')) return out;
    do {
      std::string key = string_literal();
      expect(':');
      Value v = value();
      if (!out.emplace(key, std::move(v)).second) fail("duplicate key '" + key + "'");
    } while (accept(','));
    expect('}');
    return out;
  }

  void end() {
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters after call");
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw SchemaError(loc_, fmt::format("{} at column {} in \"{}\"", what, pos_ + 1, s_));
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  std::string_view s_;
  std::string loc_;
  std::size_t pos_{0};
};

double number_arg(const std::map<std::string, Value>& args, const std::string& key, const CallReader& r) {
  const auto it = args.find(key);
  if (it == args.end()) r.fail("missing parameter '" + key + "'");
  if (!std::holds_alternative<double>(it->second)) r.fail("parameter '" + key + "' must be a number");
  return std::get<double>(it->second);
}

std::string string_arg(const std::map<std::string, Value>& args, const std::string& key, const CallReader& r) {
  const auto it = args.find(key);
  if (it == args.end()) r.fail("missing parameter '" + key + "'");
  if (!std::holds_alternative<std::string>(it->second)) r.fail("parameter '" + key + "' must be a string");
  return std::get<std::string>(it->second);
}

void only_keys(const std::map<std::string, Value>& args, std::initializer_list<const char*> allowed,
               const CallReader& r) {
  for (const auto& [k, v] : args) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) r.fail("unknown parameter '" + k + "'");
  }
}

// 3 -> "3.0", 2.5 -> "2.5"
std::string coord(double v) {
  if (v == std::floor(v) && std::abs(v) < 1e15) return fmt::format("{:.1f}", v);
  return fmt::format("{}", v);
}

// 3 -> "3", 2.5 -> "2.5"
std::string plain(double v) { return fmt::format("{}", v); }

}  // namespace

PlanAction parse_action(std::string_view text, const std::string& location) {
  CallReader r(text, location);
  const std::string name = r.identifier();
  if (name != "move_to" && name != "inspect_net") r.fail("unknown function '" + name + "'");
  r.expect('(');
  std::string target = r.string_literal();
  if (target.empty()) r.fail("empty target identifier");
  r.expect(',');
  const auto args = r.dict();
  r.expect(')');
  r.end();
  if (name == "move_to") {
    only_keys(args, {"x", "y", "z"}, r);
    return PlanAction::move_to(std::move(target),
                               Vector3d(number_arg(args, "x", r), number_arg(args, "y", r), number_arg(args, "z", r)));
  }
  only_keys(args, {"direction", "method", "distance"}, r);
  const std::string dir = string_arg(args, "direction", r);
  guidance::Direction direction;
  try {
    direction = guidance::parse_direction(dir);
  } catch (const SchemaError&) {
    r.fail("unknown direction '" + dir + "'");
  }
  const std::string method = string_arg(args, "method", r);
  if (method != "standard") r.fail("unknown method '" + method + "'");
  PlanAction a = PlanAction::inspect_net(std::move(target), direction, number_arg(args, "distance", r));
  a.method = method;
  return a;
}

std::string format_action(const PlanAction& a) {
  if (a.kind == ActionKind::MoveTo)
    return fmt::format("move_to('{}', {{'x': {}, 'y': {}, 'z': {}}})", a.target, coord(a.position.x()),
                       coord(a.position.y()), coord(a.position.z()));
  return fmt::format("inspect_net('{}', {{'direction':'{}', 'method':'{}', 'distance':{}}})", a.target,
                     guidance::to_string(a.direction), a.method, plain(a.distance));
}

MissionPlan parse_plan(std::string_view json_text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "plan document must be a JSON object keyed by ROV id");
  MissionPlan plan;
  for (const auto& [rov_id, body] : doc.items()) {
    if (rov_id.empty()) throw SchemaError("", "empty ROV id");
    if (!body.is_object()) throw SchemaError(rov_id, "ROV entry must be an object");
    for (const auto& [key, v] : body.items())
      if (key != "Plan" && key != "BatteryStatus" && key != "ThrusterStatus")
        throw SchemaError(rov_id, "unknown key '" + key + "'");
    for (const char* key : {"Plan", "BatteryStatus", "ThrusterStatus"})
      if (!body.contains(key)) throw SchemaError(rov_id, std::string("missing key '") + key + "'");
    const auto& actions = body.at("Plan");
    if (!actions.is_array()) throw SchemaError(rov_id + ".Plan", "must be an array of call strings");
    if (!body.at("BatteryStatus").is_string()) throw SchemaError(rov_id + ".BatteryStatus", "must be a string");
    if (!body.at("ThrusterStatus").is_string()) throw SchemaError(rov_id + ".ThrusterStatus", "must be a string");
    RovPlan rp;
    rp.rov_id = rov_id;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      const std::string loc = fmt::format("{}.Plan[{}]", rov_id, i);
      if (!actions[i].is_string()) throw SchemaError(loc, "action must be a string");
      rp.actions.push_back(parse_action(actions[i].get<std::string>(), loc));
    }
    rp.battery_status = body.at("BatteryStatus").get<std::string>();
    rp.thruster_status = body.at("ThrusterStatus").get<std::string>();
    plan.rovs.push_back(std::move(rp));
  }
  return plan;
}

std::string serialize_plan(const MissionPlan& plan) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& r : plan.rovs) {
    nlohmann::ordered_json body;
    auto actions = nlohmann::ordered_json::array();
    for (const auto& a : r.actions) actions.push_back(format_action(a));
    body["Plan"] = std::move(actions);
    body["BatteryStatus"] = r.battery_status;
    body["ThrusterStatus"] = r.thruster_status;
    doc[r.rov_id] = std::move(body);
  }
  return doc.dump(2) + "\n";
}

std::string format_battery_status(double battery) { return fmt::format("{}%", std::round(battery * 100.0) / 100.0); }

std::string format_thruster_status(const std::vector<int>& failed) {
  if (failed.empty()) return "All Thrusters Functional";
  return fmt::format("Faulty Thrusters: {}", fmt::join(failed, ", "));
}

std::optional<std::vector<int>> parse_thruster_status(std::string_view text) {
  const std::string lower = text::to_lower(text::trim(text));
  if (lower == "all thrusters functional") return std::vector<int>{};
  const std::string prefix = "faulty thrusters:";
  if (lower.rfind(prefix, 0) != 0) return std::nullopt;
  std::set<int> ids;
  for (auto part : text::split(std::string_view(lower).substr(prefix.size()), ',')) {
    part = text::trim(part);
    if (part.empty()) return std::nullopt;
    double v;
    try {
      v = text::parse_double(part, "ThrusterStatus");
    } catch (const SchemaError&) {
      return std::nullopt;
    }
    if (v != std::floor(v) || v < 1 || v > kNumThrusters) return std::nullopt;
    ids.insert(static_cast<int>(v));
  }
  if (ids.empty()) return std::nullopt;
  return std::vector<int>(ids.begin(), ids.end());
}

}  // namespace netpen::mission
