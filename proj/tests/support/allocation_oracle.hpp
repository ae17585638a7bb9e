#pragma once

// Independent reference solutions for box-constrained allocation.

#include "netpen/core/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace netpen::oracle {

/// Smallest ||K u - tau|| over a regular grid with `points` values per axis
/// spanning [lo_i, hi_i]. Residual sums are accumulated incrementally per level.
inline double grid_oracle_residual(const Matrix6d& k, const Vector6d& tau, const Vector6d& lo,
                                   const Vector6d& hi, int points = 11) {
  std::array<std::vector<Vector6d>, 6> contrib;
  for (int i = 0; i < 6; ++i) {
    const int n = lo(i) == hi(i) ? 1 : points;
    for (int j = 0; j < n; ++j) {
      const double u = n == 1 ? lo(i) : lo(i) + (hi(i) - lo(i)) * j / (n - 1);
      contrib[i].push_back(k.col(i) * u);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  const Vector6d base = -tau;
  for (const auto& c0 : contrib[0]) {
    const Vector6d s0 = base + c0;
    for (const auto& c1 : contrib[1]) {
      const Vector6d s1 = s0 + c1;
      for (const auto& c2 : contrib[2]) {
        const Vector6d s2 = s1 + c2;
        for (const auto& c3 : contrib[3]) {
          const Vector6d s3 = s2 + c3;
          for (const auto& c4 : contrib[4]) {
            const Vector6d s4 = s3 + c4;
            for (const auto& c5 : contrib[5]) {
              best = std::min(best, (s4 + c5).squaredNorm());
            }
          }
        }
      }
    }
  }
  return std::sqrt(best);
}

/// Projected gradient descent with a fixed 1/L step, run to a tight tolerance.
inline Vector6d projected_gradient_solution(const Matrix6d& k, const Vector6d& tau,
                                            const Vector6d& lo, const Vector6d& hi,
                                            int iterations = 200000) {
  const Matrix6d h = k.transpose() * k;
  const double lipschitz = h.eigenvalues().real().maxCoeff();
  Vector6d u = Vector6d::Zero().cwiseMax(lo).cwiseMin(hi);
  Vector6d y = u;
  double t = 1;
  for (int it = 0; it < iterations; ++it) {
    const Vector6d grad = h * y - k.transpose() * tau;
    const Vector6d next = (y - grad / lipschitz).cwiseMax(lo).cwiseMin(hi);
    const double t_next = (1 + std::sqrt(1 + 4 * t * t)) / 2;
    y = next + ((t - 1) / t_next) * (next - u);
    if ((next - u).cwiseAbs().maxCoeff() < 1e-14) {
      u = next;
      break;
    }
    u = next;
    t = t_next;
  }
  return u;
}

struct RandomAllocationCase {
  Vector6d tau;
  Vector6d d;
  Vector6d lower;
  Vector6d upper;
};

/// Wrench, degradation and limits drawn so that both feasible and saturated
/// cases appear; roughly a third of the thrusters are failed or partial.
inline RandomAllocationCase random_allocation_case(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomAllocationCase c;
  const double force_scale = unit(rng) < 0.5 ? 20.0 : 120.0;
  for (int i = 0; i < 3; ++i) c.tau(i) = force_scale * (2 * unit(rng) - 1);
  for (int i = 3; i < 6; ++i) c.tau(i) = 0.1 * force_scale * (2 * unit(rng) - 1);
  for (int i = 0; i < 6; ++i) {
    const double r = unit(rng);
    c.d(i) = r < 0.15 ? 0.0 : (r < 0.35 ? 0.5 + 0.5 * unit(rng) : 1.0);
    c.lower(i) = -(10.0 + 30.0 * unit(rng));
    c.upper(i) = 10.0 + 30.0 * unit(rng);
  }
  return c;
}

}  // namespace netpen::oracle
