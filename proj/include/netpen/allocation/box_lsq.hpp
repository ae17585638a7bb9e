#pragma once

// Active-set solver for   min ||A x - b||_2   s.t.  lo <= x <= hi.
//
// Two-sided generalisation of the Lawson-Hanson NNLS scheme. Variables are
// partitioned into a free set and a bound set (pinned at lo or hi). The inner
// loop solves the unconstrained problem over the free set and backtracks onto
// the box when the step leaves it; the outer loop releases the bound variable
// with the largest KKT violation. Variables with lo == hi are fixed and never
// enter the free set.

#include "netpen/core/types.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace netpen::allocation {

struct BoxLsqOptions {
  int max_iterations = 50;
  double kkt_tolerance = 1e-8;
};

template <typename Scalar, int N>
struct BoxLsqResult {
  Eigen::Matrix<Scalar, N, 1> x;
  Scalar residual{0};  // ||A x - b||_2
  int iterations{0};
  bool converged{false};
};

template <typename Scalar, int R, int N>
BoxLsqResult<Scalar, N> solve_box_lsq(const Eigen::Matrix<Scalar, R, N>& a,
                                      const Eigen::Matrix<Scalar, R, 1>& b,
                                      const Eigen::Matrix<Scalar, N, 1>& lo,
                                      const Eigen::Matrix<Scalar, N, 1>& hi,
                                      const BoxLsqOptions& options = {}) {
  static_assert(N != Eigen::Dynamic, "column count must be fixed");
  using Vec = Eigen::Matrix<Scalar, N, 1>;
  using SubMatrix = Eigen::Matrix<Scalar, R, Eigen::Dynamic, 0, R, N>;
  using SubVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, 0, N, 1>;
  enum class Slot { Free, Lower, Upper, Fixed };

  std::array<Slot, N> slot{};
  Vec x;
  for (int i = 0; i < N; ++i) {
    if (lo(i) >= hi(i)) {
      slot[i] = Slot::Fixed;
      x(i) = lo(i);
    } else {
      slot[i] = Slot::Free;
      x(i) = std::clamp(Scalar(0), lo(i), hi(i));
    }
  }

  const Scalar tol = Scalar(options.kkt_tolerance) *
                     (Scalar(1) + (a.transpose() * b).cwiseAbs().maxCoeff());
  const Scalar bound_tol = Scalar(1e-12) * (Scalar(1) + std::max(lo.cwiseAbs().maxCoeff(),
                                                                  hi.cwiseAbs().maxCoeff()));

  // Solves the free-set least-squares problem with bound variables held.
  auto free_solution = [&](std::array<int, N>& idx, int& count) {
    count = 0;
    for (int i = 0; i < N; ++i)
      if (slot[i] == Slot::Free) idx[count++] = i;
    Eigen::Matrix<Scalar, R, 1> rhs = b;
    for (int i = 0; i < N; ++i)
      if (slot[i] != Slot::Free) rhs -= a.col(i) * x(i);
    SubVector z(count);
    if (count == 0) return z;
    SubMatrix sub(a.rows(), count);
    for (int k = 0; k < count; ++k) sub.col(k) = a.col(idx[k]);
    Eigen::CompleteOrthogonalDecomposition<SubMatrix> cod(sub);
    z = cod.solve(rhs);
    return z;
  };

  BoxLsqResult<Scalar, N> result;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    result.iterations = iter + 1;

    // Inner loop: move to the free-set optimum, clipping onto the box.
    for (int inner = 0; inner <= N; ++inner) {
      std::array<int, N> idx{};
      int count = 0;
      const SubVector z = free_solution(idx, count);
      if (count == 0) break;

      Scalar step = Scalar(1);
      for (int k = 0; k < count; ++k) {
        const int i = idx[k];
        const Scalar delta = z(k) - x(i);
        if (z(k) > hi(i) + bound_tol && delta > Scalar(0)) {
          step = std::min(step, (hi(i) - x(i)) / delta);
        } else if (z(k) < lo(i) - bound_tol && delta < Scalar(0)) {
          step = std::min(step, (lo(i) - x(i)) / delta);
        }
      }
      step = std::clamp(step, Scalar(0), Scalar(1));

      if (step >= Scalar(1)) {
        for (int k = 0; k < count; ++k) x(idx[k]) = std::clamp(z(k), lo(idx[k]), hi(idx[k]));
        break;
      }
      for (int k = 0; k < count; ++k) {
        const int i = idx[k];
        x(i) += step * (z(k) - x(i));
        if (x(i) >= hi(i) - bound_tol && z(k) > hi(i)) {
          x(i) = hi(i);
          slot[i] = Slot::Upper;
        } else if (x(i) <= lo(i) + bound_tol && z(k) < lo(i)) {
          x(i) = lo(i);
          slot[i] = Slot::Lower;
        }
      }
    }

    // Outer loop: KKT check on the bound variables. w is the negative gradient.
    const Eigen::Matrix<Scalar, N, 1> w = a.transpose() * (b - a * x);
    int release = -1;
    Scalar worst = tol;
    for (int i = 0; i < N; ++i) {
      Scalar violation = Scalar(0);
      if (slot[i] == Slot::Lower) violation = w(i);
      if (slot[i] == Slot::Upper) violation = -w(i);
      if (violation > worst) {
        worst = violation;
        release = i;
      }
    }
    if (release < 0) {
      result.converged = true;
      break;
    }
    slot[release] = Slot::Free;
  }

  result.x = x;
  result.residual = (a * x - b).norm();
  return result;
}

}  // namespace netpen::allocation
