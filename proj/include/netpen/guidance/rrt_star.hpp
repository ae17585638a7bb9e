#pragma once

#include "netpen/guidance/geometry.hpp"

#include <cstdint>
#include <vector>

namespace netpen::guidance {

struct RrtConfig {
  double step{1.0};
  double goal_bias{0.1};
  double neighbor_radius{3.0};
  int max_iters{5000};
  // Iterations spent improving the tree once the goal has been reached.
  int refine_iters{1000};
  int shorten_iters{300};
};

struct RrtStats {
  int iterations{0};
  int nodes{0};
  int first_solution_iter{-1};
  std::vector<double> best_cost;  // best cost-to-goal after each iteration (inf before a solution)
};

/// RRT* from start to goal. Throws NoPathFound when max_iters pass without
/// connecting the goal. The result is the raw tree path (not shortened).
Path3D plan_rrt_star(const Vector3d& start, const Vector3d& goal, const ObstacleField& field,
                     const RrtConfig& config, std::uint64_t seed, RrtStats* stats = nullptr);

/// Random shortcutting: picks two arc-length positions, replaces the stretch
/// between them by a straight segment when it is collision free and shorter,
/// then drops redundant interior waypoints.
Path3D shorten_path(const Path3D& path, const ObstacleField& field, int iterations,
                    std::uint64_t seed, std::vector<double>* length_history = nullptr);

/// plan_rrt_star followed by shorten_path.
Path3D plan_transit(const Vector3d& start, const Vector3d& goal, const ObstacleField& field,
                    const RrtConfig& config, std::uint64_t seed);

}  // namespace netpen::guidance
