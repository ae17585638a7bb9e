#pragma once

#include "netpen/guidance/geometry.hpp"
#include "netpen/mission/world.hpp"

#include <random>
#include <string>
#include <vector>

namespace netpen::oracle {

/// The five-cage layout used throughout the tests.
inline std::vector<guidance::CageCylinder> five_cages() {
  const double xy[5][2] = {{0, 0}, {20, 20}, {20, -20}, {-20, 20}, {-20, -20}};
  std::vector<guidance::CageCylinder> out;
  for (int i = 0; i < 5; ++i) {
    guidance::CageCylinder c;
    c.id = "cage_" + std::to_string(i + 1);
    c.center = Vector2d(xy[i][0], xy[i][1]);
    out.push_back(c);
  }
  return out;
}

inline guidance::ObstacleField five_cage_field() {
  guidance::ObstacleField f;
  f.cages = five_cages();
  f.bounds = guidance::ObstacleField::enclosing(f.cages);
  return f;
}

inline Vector3d random_free_point(const guidance::ObstacleField& f, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    Vector3d p;
    for (int k = 0; k < 3; ++k) p(k) = f.bounds.min(k) + (f.bounds.max(k) - f.bounds.min(k)) * unit(rng);
    if (guidance::point_free(f, p)) return p;
  }
}

/// Independent segment/inflated-cylinder test: solves the quadratic for the
/// horizontal circle crossing and intersects the resulting interval with the
/// vertical slab.
inline bool quadratic_segment_hits(const guidance::CageCylinder& c, double clearance, const Vector3d& a,
                                   const Vector3d& b) {
  const double r = c.radius + clearance;
  const double px = a.x() - c.center.x(), py = a.y() - c.center.y();
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  const double qa = dx * dx + dy * dy, qb = 2 * (px * dx + py * dy), qc = px * px + py * py - r * r;
  double lo, hi;
  if (qa < 1e-18) {
    if (qc >= 0) return false;
    lo = 0;
    hi = 1;
  } else {
    const double disc = qb * qb - 4 * qa * qc;
    if (disc <= 0) return false;
    lo = (-qb - std::sqrt(disc)) / (2 * qa);
    hi = (-qb + std::sqrt(disc)) / (2 * qa);
  }
  lo = std::max(lo, 0.0);
  hi = std::min(hi, 1.0);
  if (lo >= hi) return false;
  const double za = a.z() + (b.z() - a.z()) * lo, zb = a.z() + (b.z() - a.z()) * hi;
  const double zmin = std::min(za, zb), zmax = std::max(za, zb);
  return zmax >= c.z_bottom - clearance && zmin <= c.z_top + clearance;
}

/// Random world: 1-6 cages at least 10 m apart, 0-3 stations and 1-3 ROVs
/// at least 4 m from every cage centre, random battery and thruster faults.
inline mission::WorldModel random_world(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-40.0, 40.0), battery(0.0, 100.0), unit(0.0, 1.0);
  std::uniform_int_distribution<int> cages(1, 6), stations(1, 3), rovs(1, 3);
  mission::WorldModel w;
  auto clear = [&](const Vector2d& p, double gap) {
    for (const auto& c : w.cages)
      if ((c.center - p).norm() < gap) return false;
    return true;
  };
  const int nc = cages(rng);
  while (static_cast<int>(w.cages.size()) < nc) {
    const Vector2d p(coord(rng), coord(rng));
    if (!clear(p, 10.0)) continue;
    guidance::CageCylinder c;
    c.id = "cage_" + std::to_string(w.cages.size() + 1);
    c.center = p;
    w.cages.push_back(c);
  }
  const int ns = stations(rng);
  while (static_cast<int>(w.stations.size()) < ns) {
    const Vector2d p(coord(rng), coord(rng));
    if (clear(p, 4.0)) w.stations.push_back({"docking_station_" + std::to_string(w.stations.size() + 1), p});
  }
  const int nr = rovs(rng);
  while (static_cast<int>(w.rovs.size()) < nr) {
    const Vector2d p(coord(rng), coord(rng));
    if (!clear(p, 4.0)) continue;
    mission::RovStatus r;
    r.id = "ROV" + std::to_string(w.rovs.size() + 1);
    r.position = Vector3d(p.x(), p.y(), -2.0 * unit(rng));
    r.battery = battery(rng);
    Vector6d d = Vector6d::Ones();
    for (int k = 0; k < 6; ++k)
      if (unit(rng) < 0.15) d(k) = 0.0;
    r.degradation = allocation::DegradationVectord(d);
    w.rovs.push_back(r);
  }
  return w;
}

}  // namespace netpen::oracle
