#pragma once

#include "netpen/allocation/allocator.hpp"
#include "netpen/core/types.hpp"
#include "netpen/guidance/geometry.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace netpen::mission {

struct DockingStation {
  std::string id;
  Vector2d position{Vector2d::Zero()};
};

struct RovStatus {
  std::string id;
  Vector3d position{Vector3d::Zero()};  // world frame, z up
  double battery{100.0};
  allocation::DegradationVectord degradation;

  /// 1-based indices of thrusters with d_i == 0.
  std::vector<int> failed_thrusters() const;
};

struct WorldModel {
  std::vector<guidance::CageCylinder> cages;
  std::vector<DockingStation> stations;
  std::vector<RovStatus> rovs;

  /// Unique ids, valid cages, batteries in [0, 100]. Throws SchemaError.
  void validate() const;

  const guidance::CageCylinder* find_cage(std::string_view id) const;
  const DockingStation* find_station(std::string_view id) const;
  const RovStatus* find_rov(std::string_view id) const;
  RovStatus* find_rov(std::string_view id);

  /// Station nearest (horizontally) to p; ties go to the earlier station.
  const DockingStation* nearest_station(const Vector2d& p) const;

  guidance::ObstacleField obstacle_field(double clearance = 0.5) const;

  /// Five cages, two stations, ROV1 (40 %, thruster 1 faulty) and ROV2 (100 %).
  static WorldModel standard();
  /// Same layout without ROVs.
  static WorldModel standard_layout();
};

/// Line-oriented world description:
///   cage <id> <x> <y> [radius <r>] [top <z>] [bottom <z>]
///   station <id> <x> <y>
///   rov <id> <x> <y> <z> [battery <pct>] [failed <i,j,..>] [degradation <d1,..,d6>]
/// Blank lines and '#' comments are ignored. Unknown keywords listed in
/// `extra_keywords` are skipped so scenario files can reuse the parser.
WorldModel parse_world(std::string_view text, const std::vector<std::string>& extra_keywords = {});
WorldModel load_world(const std::filesystem::path& path);
std::string format_world(const WorldModel& world);

/// "a,b,c,d,e,f" -> degradation vector. Throws SchemaError.
allocation::DegradationVectord parse_degradation(std::string_view text, const std::string& location);

}  // namespace netpen::mission
