#pragma once

#include "netpen/core/types.hpp"

#include <string>
#include <vector>

namespace netpen::guidance {

/// Vertical cylindrical net pen. Coordinates are world frame, z up (depth < 0).
struct CageCylinder {
  std::string id;
  Vector2d center{Vector2d::Zero()};
  double radius{2.5};
  double z_top{0.0};
  double z_bottom{-5.0};

  void validate() const;
};

struct Bounds {
  Vector3d min{-50.0, -50.0, -10.0};
  Vector3d max{50.0, 50.0, 0.0};

  bool contains(const Vector3d& p) const;
};

/// Obstacle field seen by the transit planner.
struct ObstacleField {
  std::vector<CageCylinder> cages;
  Bounds bounds;
  double clearance{0.5};
  double resolution{0.05};  // segment sampling step (m)

  /// Bounds that enclose every cage plus `margin`, with z in [-10, 0].
  static Bounds enclosing(const std::vector<CageCylinder>& cages, double margin = 15.0);
};

struct Path3D {
  std::vector<Vector3d> waypoints;

  double length() const;
  bool empty() const { return waypoints.empty(); }
  /// Point at arc length s, clamped to the ends.
  Vector3d point_at(double s) const;
};

/// True when p lies strictly inside the clearance-inflated cylinder.
bool inside_inflated(const CageCylinder& cage, const Vector3d& p, double clearance);

bool point_free(const ObstacleField& field, const Vector3d& p);

/// Sampling checker: tests both endpoints and points every `resolution` m.
bool segment_free(const ObstacleField& field, const Vector3d& a, const Vector3d& b);

/// Exact segment vs. inflated-cylinder intersection test.
bool segment_hits_cylinder(const CageCylinder& cage, double clearance, const Vector3d& a,
                           const Vector3d& b);

bool segment_free_analytic(const ObstacleField& field, const Vector3d& a, const Vector3d& b);

/// Planner edge check: sampled and analytic tests both pass. Every sub-segment
/// of a passing segment passes the sampled test too.
bool edge_free(const ObstacleField& field, const Vector3d& a, const Vector3d& b);

bool path_free(const ObstacleField& field, const Path3D& path);

}  // namespace netpen::guidance
