#pragma once

#include "netpen/core/types.hpp"
#include "netpen/guidance/geometry.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace netpen::guidance {

enum class Direction { TopToBottom, BottomToTop };

std::string_view to_string(Direction d);
/// Accepts "top-to-bottom" / "bottom-to-top"; throws SchemaError otherwise.
Direction parse_direction(std::string_view text);
Direction opposite(Direction d);

/// Constant-radius spiral about a vertical axis. z varies linearly in time
/// from z_start to z_end while the angle advances at omega = 2 pi turns / T.
struct HelixSpec {
  Vector2d center{Vector2d::Zero()};
  double radius{3.0};
  double theta0{0.0};
  double z_start{0.0};
  double z_end{-5.0};
  double turns{5.0};
  double duration{150.0};

  Direction direction() const { return z_end <= z_start ? Direction::TopToBottom : Direction::BottomToTop; }
  double omega() const;
  /// Signed depth change per turn; zero when turns == 0.
  double pitch() const;
  void validate() const;

  /// Standard inspection helix over a cage's depth span.
  static HelixSpec for_cage(const CageCylinder& cage, Direction direction, double theta0,
                            double radius = 3.0, double turns = 5.0, double duration = 150.0);
};

struct HelixSample {
  double t{0.0};
  Vector3d position{Vector3d::Zero()};
  double yaw{0.0};  // world-frame heading toward the axis
  Vector3d velocity{Vector3d::Zero()};
  double yaw_rate{0.0};
};

HelixSample helix_sample(const HelixSpec& spec, double t);

/// Samples t = 0, dt, ..., T (the final sample lands exactly on T).
std::vector<HelixSample> helix_trajectory(const HelixSpec& spec, double dt);

enum class OffsetRule {
  TwoOption,  // (x_c + 3, y_c) or (x_c, y_c - 3)
  AllAxes,    // any of the four axis-aligned offsets
};

std::vector<Vector2d> offset_candidates(const CageCylinder& cage, OffsetRule rule, double distance = 3.0);

/// Nearest legal inspection point; ties resolve to the earlier candidate (+x first).
Vector2d inspection_offset_point(const CageCylinder& cage, const Vector2d& rov_position,
                                 OffsetRule rule = OffsetRule::TwoOption, double distance = 3.0);

/// Fraction of the cage wall band covered by a forward-looking camera with
/// a conical field of view of the given half-angle, checked on a grid of
/// `angle_cells` x `depth_cells` wall points between z_lo and z_hi.
double helix_coverage(const HelixSpec& spec, const CageCylinder& cage, double fov_half_angle,
                      double dt, double z_lo, double z_hi, int angle_cells = 120, int depth_cells = 60);

}  // namespace netpen::guidance
