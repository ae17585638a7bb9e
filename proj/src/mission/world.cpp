#include "netpen/mission/world.hpp"

#include "netpen/core/errors.hpp"
#include "netpen/core/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <set>

namespace netpen::mission {

std::vector<int> RovStatus::failed_thrusters() const {
  std::vector<int> out;
  for (int i = 0; i < kNumThrusters; ++i)
    if (degradation.failed(i)) out.push_back(i + 1);
  return out;
}

void WorldModel::validate() const {
  std::set<std::string> ids;
  auto unique = [&](const std::string& id, const char* what) {
    if (id.empty()) throw SchemaError(what, "empty identifier");
    if (!ids.insert(id).second) throw SchemaError(id, "duplicate identifier");
  };
  for (const auto& c : cages) {
    unique(c.id, "cage");
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw SchemaError(c.id, e.what());
    }
  }
  for (const auto& s : stations) {
    unique(s.id, "station");
    if (!s.position.allFinite()) throw SchemaError(s.id, "non-finite station position");
  }
  for (const auto& r : rovs) {
    unique(r.id, "rov");
    if (!(r.battery >= 0.0 && r.battery <= 100.0)) throw SchemaError(r.id, "battery must lie in [0, 100]");
    if (!r.position.allFinite()) throw SchemaError(r.id, "non-finite ROV position");
  }
}

const guidance::CageCylinder* WorldModel::find_cage(std::string_view id) const {
  for (const auto& c : cages)
    if (c.id == id) return &c;
  return nullptr;
}

const DockingStation* WorldModel::find_station(std::string_view id) const {
  for (const auto& s : stations)
    if (s.id == id) return &s;
  return nullptr;
}

const RovStatus* WorldModel::find_rov(std::string_view id) const {
  for (const auto& r : rovs)
    if (r.id == id) return &r;
  return nullptr;
}

RovStatus* WorldModel::find_rov(std::string_view id) {
  for (auto& r : rovs)
    if (r.id == id) return &r;
  return nullptr;
}

const DockingStation* WorldModel::nearest_station(const Vector2d& p) const {
  const DockingStation* best = nullptr;
  double best_d = 0.0;
  for (const auto& s : stations) {
    const double d = (s.position - p).norm();
    if (!best || d < best_d) {
      best = &s;
      best_d = d;
    }
  }
  return best;
}

guidance::ObstacleField WorldModel::obstacle_field(double clearance) const {
  guidance::ObstacleField f;
  f.cages = cages;
  f.clearance = clearance;
  f.bounds = guidance::ObstacleField::enclosing(cages);
  for (const auto& s : stations) {
    f.bounds.min.head<2>() = f.bounds.min.head<2>().cwiseMin(s.position - Vector2d::Constant(10.0));
    f.bounds.max.head<2>() = f.bounds.max.head<2>().cwiseMax(s.position + Vector2d::Constant(10.0));
  }
  for (const auto& r : rovs) {
    f.bounds.min.head<2>() = f.bounds.min.head<2>().cwiseMin(r.position.head<2>() - Vector2d::Constant(10.0));
    f.bounds.max.head<2>() = f.bounds.max.head<2>().cwiseMax(r.position.head<2>() + Vector2d::Constant(10.0));
  }
  return f;
}

WorldModel WorldModel::standard_layout() {
  WorldModel w;
  const double xy[5][2] = {{0, 0}, {20, 20}, {20, -20}, {-20, 20}, {-20, -20}};
  for (int i = 0; i < 5; ++i) {
    guidance::CageCylinder c;
    c.id = fmt::format("cage_{}", i + 1);
    c.center = Vector2d(xy[i][0], xy[i][1]);
    w.cages.push_back(c);
  }
  w.stations.push_back({"docking_station_1", Vector2d(10, 0)});
  w.stations.push_back({"docking_station_2", Vector2d(25, 25)});
  return w;
}

WorldModel WorldModel::standard() {
  WorldModel w = standard_layout();
  w.rovs.push_back({"ROV1", Vector3d(2, 4, -1), 40.0, allocation::DegradationVectord::with_failed({1})});
  w.rovs.push_back({"ROV2", Vector3d(25, 10, -2), 100.0, allocation::DegradationVectord::healthy()});
  return w;
}

allocation::DegradationVectord parse_degradation(std::string_view text, const std::string& location) {
  const auto parts = text::split(text, ',');
  if (parts.size() != static_cast<std::size_t>(kNumThrusters))
    throw SchemaError(location, "degradation needs 6 comma-separated values");
  Vector6d d;
  for (int i = 0; i < kNumThrusters; ++i) d(i) = text::parse_double(text::trim(parts[static_cast<std::size_t>(i)]), location);
  try {
    return allocation::DegradationVectord(d);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(location, e.what());
  }
}

namespace {

std::vector<int> parse_index_list(std::string_view text, const std::string& location) {
  std::vector<int> out;
  for (auto part : text::split(text, ',')) {
    part = text::trim(part);
    if (part.empty()) continue;
    const double v = text::parse_double(part, location);
    if (v != std::floor(v) || v < 1 || v > kNumThrusters) throw SchemaError(location, "thruster index must be 1..6");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

}  // namespace

WorldModel parse_world(std::string_view text, const std::vector<std::string>& extra_keywords) {
  WorldModel w;
  int line_no = 0;
  for (auto raw : text::split_lines(text)) {
    ++line_no;
    const auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    const auto tok = text::split_whitespace(line);
    const std::string loc = fmt::format("line {}", line_no);
    const std::string key(tok[0]);
    auto need = [&](std::size_t n) {
      if (tok.size() < n) throw SchemaError(loc, "too few fields for '" + key + "'");
    };
    auto num = [&](std::size_t i) { return text::parse_double(tok[i], loc); };
    if (key == "cage") {
      need(4);
      guidance::CageCylinder c;
      c.id = std::string(tok[1]);
      c.center = Vector2d(num(2), num(3));
      for (std::size_t i = 4; i < tok.size(); i += 2) {
        if (i + 1 >= tok.size()) throw SchemaError(loc, "option without value");
        if (tok[i] == "radius") c.radius = num(i + 1);
        else if (tok[i] == "top") c.z_top = num(i + 1);
        else if (tok[i] == "bottom") c.z_bottom = num(i + 1);
        else throw SchemaError(loc, "unknown cage option '" + std::string(tok[i]) + "'");
      }
      w.cages.push_back(c);
    } else if (key == "station") {
      need(4);
      if (tok.size() != 4) throw SchemaError(loc, "station takes an id and x y");
      w.stations.push_back({std::string(tok[1]), Vector2d(num(2), num(3))});
    } else if (key == "rov") {
      need(5);
      RovStatus r;
      r.id = std::string(tok[1]);
      r.position = Vector3d(num(2), num(3), num(4));
      for (std::size_t i = 5; i < tok.size(); i += 2) {
        if (i + 1 >= tok.size()) throw SchemaError(loc, "option without value");
        if (tok[i] == "battery") {
          r.battery = num(i + 1);
        } else if (tok[i] == "failed") {
          Vector6d d = r.degradation.values();
          for (int t : parse_index_list(tok[i + 1], loc)) d(t - 1) = 0.0;
          r.degradation = allocation::DegradationVectord(d);
        } else if (tok[i] == "degradation") {
          r.degradation = parse_degradation(tok[i + 1], loc);
        } else {
          throw SchemaError(loc, "unknown rov option '" + std::string(tok[i]) + "'");
        }
      }
      w.rovs.push_back(r);
    } else if (std::find(extra_keywords.begin(), extra_keywords.end(), key) == extra_keywords.end()) {
      throw SchemaError(loc, "unknown keyword '" + key + "'");
    }
  }
  w.validate();
  return w;
}

WorldModel load_world(const std::filesystem::path& path) { return parse_world(text::read_file(path)); }

std::string format_world(const WorldModel& world) {
  std::string out;
  for (const auto& c : world.cages)
    out += fmt::format("cage {} {} {} radius {} top {} bottom {}\n", c.id, c.center.x(), c.center.y(), c.radius,
                       c.z_top, c.z_bottom);
  for (const auto& s : world.stations) out += fmt::format("station {} {} {}\n", s.id, s.position.x(), s.position.y());
  for (const auto& r : world.rovs) {
    const auto& d = r.degradation.values();
    out += fmt::format("rov {} {} {} {} battery {} degradation {},{},{},{},{},{}\n", r.id, r.position.x(),
                       r.position.y(), r.position.z(), r.battery, d(0), d(1), d(2), d(3), d(4), d(5));
  }
  return out;
}

}  // namespace netpen::mission
