#include "netpen/guidance/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netpen::guidance {

namespace {
constexpr double kBoundaryEps = 1e-9;
}

void CageCylinder::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("cage radius must be positive");
  if (!(z_bottom < z_top)) throw std::invalid_argument("cage z_bottom must lie below z_top");
  if (!center.allFinite()) throw std::invalid_argument("cage centre must be finite");
}

bool Bounds::contains(const Vector3d& p) const {
  return (p.array() >= min.array() - kBoundaryEps).all() &&
         (p.array() <= max.array() + kBoundaryEps).all();
}

Bounds ObstacleField::enclosing(const std::vector<CageCylinder>& cages, double margin) {
  Bounds b;
  b.min = Vector3d(-margin, -margin, -10.0);
  b.max = Vector3d(margin, margin, 0.0);
  for (const auto& c : cages) {
    b.min.x() = std::min(b.min.x(), c.center.x() - c.radius - margin);
    b.min.y() = std::min(b.min.y(), c.center.y() - c.radius - margin);
    b.max.x() = std::max(b.max.x(), c.center.x() + c.radius + margin);
    b.max.y() = std::max(b.max.y(), c.center.y() + c.radius + margin);
  }
  return b;
}

double Path3D::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) total += (waypoints[i] - waypoints[i - 1]).norm();
  return total;
}

Vector3d Path3D::point_at(double s) const {
  if (waypoints.empty()) throw std::logic_error("point_at on an empty path");
  if (s <= 0.0) return waypoints.front();
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const double seg = (waypoints[i] - waypoints[i - 1]).norm();
    if (s <= seg && seg > 0.0) return waypoints[i - 1] + (waypoints[i] - waypoints[i - 1]) * (s / seg);
    s -= seg;
  }
  return waypoints.back();
}

bool inside_inflated(const CageCylinder& cage, const Vector3d& p, double clearance) {
  if (p.z() > cage.z_top + clearance || p.z() < cage.z_bottom - clearance) return false;
  const double r = cage.radius + clearance;
  return (p.head<2>() - cage.center).squaredNorm() < (r - kBoundaryEps) * (r - kBoundaryEps);
}

bool point_free(const ObstacleField& field, const Vector3d& p) {
  if (!field.bounds.contains(p)) return false;
  for (const auto& c : field.cages)
    if (inside_inflated(c, p, field.clearance)) return false;
  return true;
}

bool segment_free(const ObstacleField& field, const Vector3d& a, const Vector3d& b) {
  const double len = (b - a).norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / field.resolution)));
  for (int i = 0; i <= n; ++i) {
    if (!point_free(field, a + (b - a) * (static_cast<double>(i) / n))) return false;
  }
  return true;
}

bool segment_hits_cylinder(const CageCylinder& cage, double clearance, const Vector3d& a,
                           const Vector3d& b) {
  const Vector3d d = b - a;
  // Clip the parameter range to the inflated vertical slab.
  double t0 = 0.0, t1 = 1.0;
  const double zlo = cage.z_bottom - clearance, zhi = cage.z_top + clearance;
  if (std::abs(d.z()) < 1e-15) {
    if (a.z() < zlo || a.z() > zhi) return false;
  } else {
    double ta = (zlo - a.z()) / d.z(), tb = (zhi - a.z()) / d.z();
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  // Minimise the horizontal distance to the axis over [t0, t1].
  const Vector2d p = a.head<2>() - cage.center;
  const Vector2d q = d.head<2>();
  const double qq = q.squaredNorm();
  double t = t0;
  if (qq > 0.0) t = std::clamp(-p.dot(q) / qq, t0, t1);
  const double r = cage.radius + clearance - kBoundaryEps;
  return (p + q * t).squaredNorm() < r * r;
}

bool segment_free_analytic(const ObstacleField& field, const Vector3d& a, const Vector3d& b) {
  if (!field.bounds.contains(a) || !field.bounds.contains(b)) return false;
  for (const auto& c : field.cages)
    if (segment_hits_cylinder(c, field.clearance, a, b)) return false;
  return true;
}

bool edge_free(const ObstacleField& field, const Vector3d& a, const Vector3d& b) {
  return segment_free(field, a, b) && segment_free_analytic(field, a, b);
}

bool path_free(const ObstacleField& field, const Path3D& path) {
  if (path.waypoints.size() == 1) return point_free(field, path.waypoints.front());
  for (std::size_t i = 1; i < path.waypoints.size(); ++i)
    if (!segment_free(field, path.waypoints[i - 1], path.waypoints[i])) return false;
  return true;
}

}  // namespace netpen::guidance
