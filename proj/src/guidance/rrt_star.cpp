#include "netpen/guidance/rrt_star.hpp"

#include "netpen/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace netpen::guidance {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  Vector3d p;
  int parent{-1};
  double cost{0.0};
  std::vector<int> children;
};

class Tree {
 public:
  explicit Tree(const Vector3d& root) { nodes_.push_back(Node{root, -1, 0.0, {}}); }

  const Node& operator[](int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(nodes_.size()); }

  int nearest(const Vector3d& q) const {
    int best = 0;
    double best_d = kInf;
    for (int i = 0; i < size(); ++i) {
      const double d = (nodes_[static_cast<std::size_t>(i)].p - q).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  std::vector<int> near(const Vector3d& q, double radius) const {
    std::vector<int> out;
    const double r2 = radius * radius;
    for (int i = 0; i < size(); ++i)
      if ((nodes_[static_cast<std::size_t>(i)].p - q).squaredNorm() <= r2) out.push_back(i);
    return out;
  }

  int add(const Vector3d& p, int parent) {
    const double cost = at(parent).cost + (p - at(parent).p).norm();
    nodes_.push_back(Node{p, parent, cost, {}});
    const int id = size() - 1;
    at(parent).children.push_back(id);
    return id;
  }

  void reparent(int node, int parent) {
    auto& old_children = at(at(node).parent).children;
    old_children.erase(std::find(old_children.begin(), old_children.end(), node));
    at(node).parent = parent;
    at(parent).children.push_back(node);
    propagate(node, at(parent).cost + (at(node).p - at(parent).p).norm());
  }

  std::vector<Vector3d> trace(int node) const {
    std::vector<Vector3d> out;
    for (int i = node; i >= 0; i = (*this)[i].parent) out.push_back((*this)[i].p);
    std::reverse(out.begin(), out.end());
    return out;
  }

 private:
  Node& at(int i) { return nodes_[static_cast<std::size_t>(i)]; }

  void propagate(int node, double cost) {
    std::vector<std::pair<int, double>> stack{{node, cost}};
    while (!stack.empty()) {
      auto [n, c] = stack.back();
      stack.pop_back();
      at(n).cost = c;
      for (int child : at(n).children)
        stack.emplace_back(child, c + (at(child).p - at(n).p).norm());
    }
  }

  std::vector<Node> nodes_;
};

}  // namespace

Path3D plan_rrt_star(const Vector3d& start, const Vector3d& goal, const ObstacleField& field,
                     const RrtConfig& config, std::uint64_t seed, RrtStats* stats) {
  if (!point_free(field, start)) throw NoPathFound("start point is in collision");
  if (!point_free(field, goal)) throw NoPathFound("goal point is in collision");
  if ((goal - start).norm() < 1e-12) {
    if (stats) *stats = RrtStats{0, 1, 0, {}};
    return Path3D{{start}};
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Bounds& b = field.bounds;

  Tree tree(start);
  // Nodes within one step of the goal with a free connecting segment.
  std::vector<int> goal_links;
  double best = kInf;
  int best_node = -1;
  int solved_at = -1;
  RrtStats local;

  auto refresh_best = [&] {
    for (int n : goal_links) {
      const double c = tree[n].cost + (goal - tree[n].p).norm();
      if (c < best) {
        best = c;
        best_node = n;
      }
    }
  };

  int iter = 0;
  for (; iter < config.max_iters; ++iter) {
    if (solved_at >= 0 && iter - solved_at >= config.refine_iters) break;

    Vector3d sample;
    if (unit(rng) < config.goal_bias) {
      sample = goal;
    } else {
      for (int k = 0; k < 3; ++k) sample(k) = b.min(k) + (b.max(k) - b.min(k)) * unit(rng);
    }

    const int nearest = tree.nearest(sample);
    Vector3d dir = sample - tree[nearest].p;
    const double dist = dir.norm();
    if (dist < 1e-12) {
      local.best_cost.push_back(best);
      continue;
    }
    const Vector3d candidate = dist > config.step ? Vector3d(tree[nearest].p + dir * (config.step / dist)) : sample;
    if (!edge_free(field, tree[nearest].p, candidate)) {
      local.best_cost.push_back(best);
      continue;
    }

    // Choose the cheapest collision-free parent among the neighbours.
    const std::vector<int> neighbours = tree.near(candidate, config.neighbor_radius);
    int parent = nearest;
    double parent_cost = tree[nearest].cost + (candidate - tree[nearest].p).norm();
    for (int n : neighbours) {
      const double c = tree[n].cost + (candidate - tree[n].p).norm();
      if (c < parent_cost - 1e-12 && edge_free(field, tree[n].p, candidate)) {
        parent = n;
        parent_cost = c;
      }
    }
    const int added = tree.add(candidate, parent);

    // Rewire neighbours through the new node.
    for (int n : neighbours) {
      if (n == parent) continue;
      const double c = tree[added].cost + (tree[n].p - candidate).norm();
      if (c < tree[n].cost - 1e-12 && edge_free(field, candidate, tree[n].p)) tree.reparent(n, added);
    }

    if ((goal - candidate).norm() <= config.step && edge_free(field, candidate, goal)) {
      goal_links.push_back(added);
      if (solved_at < 0) solved_at = iter;
    }
    refresh_best();
    local.best_cost.push_back(best);
  }

  local.iterations = iter;
  local.nodes = tree.size();
  local.first_solution_iter = solved_at;
  if (stats) *stats = std::move(local);
  if (best_node < 0) throw NoPathFound("no path to goal within the iteration budget");

  Path3D path{tree.trace(best_node)};
  if ((path.waypoints.back() - goal).norm() > 1e-12) path.waypoints.push_back(goal);
  return path;
}

namespace {

/// Removes waypoints that coincide with their predecessor.
void drop_duplicates(std::vector<Vector3d>& pts) {
  std::vector<Vector3d> out;
  for (const auto& p : pts)
    if (out.empty() || (p - out.back()).norm() > 1e-9) out.push_back(p);
  pts = std::move(out);
}

}  // namespace

Path3D shorten_path(const Path3D& path, const ObstacleField& field, int iterations,
                    std::uint64_t seed, std::vector<double>* length_history) {
  Path3D current = path;
  drop_duplicates(current.waypoints);
  if (current.waypoints.size() <= 2) {
    if (length_history) length_history->assign(static_cast<std::size_t>(std::max(0, iterations)), current.length());
    return current;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (int it = 0; it < iterations; ++it) {
    const double total = current.length();
    double s1 = unit(rng) * total, s2 = unit(rng) * total;
    if (s1 > s2) std::swap(s1, s2);
    if (s2 - s1 > 1e-6) {
      // Locate the segments containing s1 and s2.
      const auto& w = current.waypoints;
      std::size_t i1 = 0, i2 = 0;
      double acc = 0.0, acc1 = 0.0, acc2 = 0.0;
      for (std::size_t i = 1; i < w.size(); ++i) {
        const double seg = (w[i] - w[i - 1]).norm();
        if (acc + seg >= s1 && i1 == 0) {
          i1 = i;
          acc1 = acc;
        }
        if (acc + seg >= s2 && i2 == 0) {
          i2 = i;
          acc2 = acc;
        }
        acc += seg;
      }
      if (i1 == 0) i1 = w.size() - 1;
      if (i2 == 0) i2 = w.size() - 1;
      if (i2 > i1) {
        const auto interp = [&](std::size_t i, double s0, double s) {
          const double seg = (w[i] - w[i - 1]).norm();
          return Vector3d(seg > 0 ? Vector3d(w[i - 1] + (w[i] - w[i - 1]) * ((s - s0) / seg)) : w[i]);
        };
        const Vector3d p1 = interp(i1, acc1, s1);
        const Vector3d p2 = interp(i2, acc2, s2);
        // Length of the stretch p1 -> w[i1] ... w[i2-1] -> p2.
        double old_len = (w[i1] - p1).norm() + (p2 - w[i2 - 1]).norm();
        for (std::size_t i = i1 + 1; i < i2; ++i) old_len += (w[i] - w[i - 1]).norm();
        if ((p2 - p1).norm() < old_len - 1e-9 && edge_free(field, p1, p2)) {
          std::vector<Vector3d> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i1));
          next.push_back(p1);
          next.push_back(p2);
          next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(i2), w.end());
          drop_duplicates(next);
          current.waypoints = std::move(next);
        }
      }
    }
    if (length_history) length_history->push_back(current.length());
  }

  // Greedy pass: connect each kept waypoint to the furthest visible one.
  std::vector<Vector3d> pruned{current.waypoints.front()};
  std::size_t i = 0;
  const auto& w = current.waypoints;
  while (i + 1 < w.size()) {
    std::size_t j = w.size() - 1;
    while (j > i + 1 && !edge_free(field, w[i], w[j])) --j;
    pruned.push_back(w[j]);
    i = j;
  }
  current.waypoints = std::move(pruned);
  return current;
}

Path3D plan_transit(const Vector3d& start, const Vector3d& goal, const ObstacleField& field,
                    const RrtConfig& config, std::uint64_t seed) {
  const Path3D raw = plan_rrt_star(start, goal, field, config, seed);
  return shorten_path(raw, field, config.shorten_iters, seed ^ 0x9e3779b97f4a7c15ULL);
}

}  // namespace netpen::guidance
