#include "netpen/guidance/helix.hpp"

#include "netpen/core/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace netpen::guidance {

std::string_view to_string(Direction d) {
  return d == Direction::TopToBottom ? "top-to-bottom" : "bottom-to-top";
}

Direction parse_direction(std::string_view text) {
  if (text == "top-to-bottom") return Direction::TopToBottom;
  if (text == "bottom-to-top") return Direction::BottomToTop;
  throw SchemaError("direction", "unknown inspection direction '" + std::string(text) + "'");
}

Direction opposite(Direction d) {
  return d == Direction::TopToBottom ? Direction::BottomToTop : Direction::TopToBottom;
}

double HelixSpec::omega() const { return 2.0 * std::numbers::pi * turns / duration; }

double HelixSpec::pitch() const { return turns > 0.0 ? (z_end - z_start) / turns : 0.0; }

void HelixSpec::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("helix radius must be positive");
  if (!(duration > 0.0)) throw std::invalid_argument("helix duration must be positive");
  if (!(turns >= 0.0)) throw std::invalid_argument("helix turns must be non-negative");
  if (z_start == z_end) throw std::invalid_argument("helix must span a non-zero depth range");
}

HelixSpec HelixSpec::for_cage(const CageCylinder& cage, Direction direction, double theta0,
                              double radius, double turns, double duration) {
  HelixSpec s;
  s.center = cage.center;
  s.radius = radius;
  s.theta0 = theta0;
  s.turns = turns;
  s.duration = duration;
  s.z_start = direction == Direction::TopToBottom ? cage.z_top : cage.z_bottom;
  s.z_end = direction == Direction::TopToBottom ? cage.z_bottom : cage.z_top;
  return s;
}

HelixSample helix_sample(const HelixSpec& spec, double t) {
  const double w = spec.omega();
  const double angle = w * t + spec.theta0;
  const double c = std::cos(angle), s = std::sin(angle);
  const double vz = (spec.z_end - spec.z_start) / spec.duration;
  HelixSample out;
  out.t = t;
  out.position = Vector3d(spec.center.x() + spec.radius * c, spec.center.y() + spec.radius * s,
                          spec.z_start + vz * t);
  out.yaw = std::atan2(-s, -c);
  out.velocity = Vector3d(-spec.radius * w * s, spec.radius * w * c, vz);
  out.yaw_rate = w;
  return out;
}

std::vector<HelixSample> helix_trajectory(const HelixSpec& spec, double dt) {
  spec.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("helix_trajectory: dt must be positive");
  const auto n = static_cast<long>(std::ceil(spec.duration / dt - 1e-9));
  std::vector<HelixSample> out;
  out.reserve(static_cast<std::size_t>(n + 1));
  for (long i = 0; i < n; ++i) out.push_back(helix_sample(spec, static_cast<double>(i) * dt));
  out.push_back(helix_sample(spec, spec.duration));
  return out;
}

std::vector<Vector2d> offset_candidates(const CageCylinder& cage, OffsetRule rule, double distance) {
  const Vector2d c = cage.center;
  std::vector<Vector2d> out{c + Vector2d(distance, 0.0), c + Vector2d(0.0, -distance)};
  if (rule == OffsetRule::AllAxes) {
    out.push_back(c + Vector2d(-distance, 0.0));
    out.push_back(c + Vector2d(0.0, distance));
  }
  return out;
}

Vector2d inspection_offset_point(const CageCylinder& cage, const Vector2d& rov_position,
                                 OffsetRule rule, double distance) {
  const auto candidates = offset_candidates(cage, rule, distance);
  Vector2d best = candidates.front();
  double best_d = (best - rov_position).norm();
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double d = (candidates[i] - rov_position).norm();
    if (d < best_d) {
      best_d = d;
      best = candidates[i];
    }
  }
  return best;
}

double helix_coverage(const HelixSpec& spec, const CageCylinder& cage, double fov_half_angle,
                      double dt, double z_lo, double z_hi, int angle_cells, int depth_cells) {
  const auto samples = helix_trajectory(spec, dt);
  const double cos_fov = std::cos(fov_half_angle);
  int covered = 0;
  for (int ia = 0; ia < angle_cells; ++ia) {
    const double a = 2.0 * std::numbers::pi * (ia + 0.5) / angle_cells;
    const Vector2d radial(std::cos(a), std::sin(a));
    for (int iz = 0; iz < depth_cells; ++iz) {
      const double z = z_lo + (z_hi - z_lo) * (depth_cells == 1 ? 0.5 : static_cast<double>(iz) / (depth_cells - 1));
      const Vector3d wall(cage.center.x() + cage.radius * radial.x(),
                          cage.center.y() + cage.radius * radial.y(), z);
      for (const auto& s : samples) {
        const Vector3d look(std::cos(s.yaw), std::sin(s.yaw), 0.0);
        const Vector3d ray = wall - s.position;
        // The wall point must face the camera (outer side of the net).
        const Vector2d outward = radial;
        if (outward.dot(-ray.head<2>()) <= 0.0) continue;
        if (look.dot(ray) >= cos_fov * ray.norm()) {
          ++covered;
          break;
        }
      }
    }
  }
  return static_cast<double>(covered) / (angle_cells * depth_cells);
}

}  // namespace netpen::guidance
