#pragma once

// World frame: x east-ish, y north-ish, z up (depth negative), as used in
// plans and world files. Simulation frame: NED with z down. The map between
// them is a rotation by pi about x: (x, y, z) -> (x, -y, -z); headings flip
// sign.

#include "netpen/core/types.hpp"

namespace netpen::sim {

inline Vector3d world_to_ned(const Vector3d& p) { return Vector3d(p.x(), -p.y(), -p.z()); }
inline Vector3d ned_to_world(const Vector3d& p) { return Vector3d(p.x(), -p.y(), -p.z()); }
inline double world_yaw_to_ned(double yaw) { return wrap_angle(-yaw); }
inline double ned_yaw_to_world(double yaw) { return wrap_angle(-yaw); }

}  // namespace netpen::sim
