#pragma once

#include "netpen/allocation/box_lsq.hpp"
#include "netpen/core/errors.hpp"
#include "netpen/core/types.hpp"

#include <Eigen/SVD>

#include <array>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace netpen::allocation {

/// Singular values below this fraction of the largest count as zero.
inline constexpr double kRankThreshold = 1e-6;

/// Per-thruster health factors: 1 healthy, 0 failed.
template <typename Scalar = double>
class DegradationVector {
 public:
  DegradationVector() : values_(Vector6<Scalar>::Ones()) {}
  explicit DegradationVector(const Vector6<Scalar>& values) : values_(values) {
    for (int i = 0; i < kNumThrusters; ++i) {
      if (!(values_(i) >= Scalar(0) && values_(i) <= Scalar(1))) {
        throw std::invalid_argument("degradation factors must lie in [0, 1]");
      }
    }
  }

  static DegradationVector healthy() { return DegradationVector(); }

  /// Thrusters listed 1-based are set to zero.
  static DegradationVector with_failed(std::initializer_list<int> failed) {
    Vector6<Scalar> v = Vector6<Scalar>::Ones();
    for (int t : failed) {
      if (t < 1 || t > kNumThrusters) throw std::invalid_argument("thruster index out of range");
      v(t - 1) = Scalar(0);
    }
    return DegradationVector(v);
  }

  const Vector6<Scalar>& values() const { return values_; }
  Scalar operator[](int i) const { return values_(i); }
  bool failed(int i) const { return values_(i) == Scalar(0); }
  bool operator==(const DegradationVector& other) const { return values_ == other.values_; }

 private:
  Vector6<Scalar> values_;
};

template <typename Scalar = double>
struct ThrusterLimits {
  Vector6<Scalar> lower{Vector6<Scalar>::Constant(Scalar(-30))};
  Vector6<Scalar> upper{Vector6<Scalar>::Constant(Scalar(35))};

  void validate() const {
    if ((lower.array() >= Scalar(0)).any() || (upper.array() <= Scalar(0)).any()) {
      throw std::invalid_argument("thruster limits must satisfy lower < 0 < upper");
    }
  }
};

template <typename Scalar>
int numerical_rank(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) <= Scalar(0)) return 0;
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > Scalar(kRankThreshold) * s(0)) ++rank;
  return rank;
}

/// Moore-Penrose allocation: the minimum-norm minimiser of ||K u - tau||.
///
/// The standard geometry has rank 5 (on the vectored thrusters the roll and
/// pitch rows are multiples of the sway and surge rows), so rank deficiency
/// alone is tolerated. Throws SingularAllocation when the controlled rows
/// {X, Y, Z, N} drop below rank 4.
template <typename Scalar>
Vector6<Scalar> allocate_pseudo_inverse(const Matrix6<Scalar>& k, const std::type_identity_t<Wrench<Scalar>>& tau) {
  Eigen::Matrix<Scalar, 4, 6> controlled;
  for (int r = 0; r < 4; ++r) controlled.row(r) = k.row(r < 3 ? r : 5);
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, 4, 6>> check(controlled);
  check.setThreshold(Scalar(kRankThreshold));
  if (check.rank() < 4) throw SingularAllocation("allocation matrix cannot span surge, sway, heave and yaw");
  Eigen::JacobiSVD<Matrix6<Scalar>> svd(k, Eigen::ComputeFullU | Eigen::ComputeFullV);
  svd.setThreshold(Scalar(kRankThreshold));
  return svd.solve(tau);
}

template <typename Scalar = double>
struct AllocationResult {
  Vector6<Scalar> thrust{Vector6<Scalar>::Zero()};
  Scalar residual{0};
  int iterations{0};
  bool converged{false};
};

/// Box bounds [u_min * d, u_max * d]; a failed thruster gets exactly [0, 0].
template <typename Scalar>
std::pair<Vector6<Scalar>, Vector6<Scalar>> degraded_box(const DegradationVector<Scalar>& d,
                                                         const ThrusterLimits<Scalar>& limits) {
  Vector6<Scalar> lo, hi;
  for (int i = 0; i < kNumThrusters; ++i) {
    if (d.failed(i)) {
      lo(i) = hi(i) = Scalar(0);
    } else {
      lo(i) = limits.lower(i) * d[i];
      hi(i) = limits.upper(i) * d[i];
    }
  }
  return {lo, hi};
}

/// Minimiser of ||K u - tau|| over the degraded thruster box. Infeasible
/// wrenches yield the best-effort minimiser; its residual is reported.
template <typename Scalar>
AllocationResult<Scalar> allocate_constrained(const Matrix6<Scalar>& k, const std::type_identity_t<Wrench<Scalar>>& tau,
                                              const DegradationVector<Scalar>& d,
                                              const ThrusterLimits<Scalar>& limits,
                                              const BoxLsqOptions& options = {}) {
  const auto [lo, hi] = degraded_box(d, limits);
  const auto solved = solve_box_lsq<Scalar, 6, 6>(k, tau, lo, hi, options);
  AllocationResult<Scalar> out;
  out.thrust = solved.x;
  for (int i = 0; i < kNumThrusters; ++i)
    if (d.failed(i)) out.thrust(i) = Scalar(0);
  out.residual = solved.residual;
  out.iterations = solved.iterations;
  out.converged = solved.converged;
  return out;
}

enum class Axis { Surge = 0, Sway = 1, Heave = 2, Yaw = 5 };
inline constexpr std::array<Axis, 4> kControlledAxes{Axis::Surge, Axis::Sway, Axis::Heave, Axis::Yaw};

inline const char* axis_name(Axis axis) {
  switch (axis) {
    case Axis::Surge: return "surge";
    case Axis::Sway: return "sway";
    case Axis::Heave: return "heave";
    case Axis::Yaw: return "yaw";
  }
  return "?";
}

struct Controllability {
  bool capable{false};
  int rank{0};
  // Whether a pure unit wrench on each of surge, sway, heave, yaw is reachable.
  std::array<bool, 4> axis_reachable{};
};

/// Rank test on the {X, Y, Z, N} rows of K restricted to working thrusters.
template <typename Scalar>
Controllability controllability_check(const Matrix6<Scalar>& k, const DegradationVector<Scalar>& d) {
  using Dyn = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  int working = 0;
  for (int i = 0; i < kNumThrusters; ++i)
    if (d[i] > Scalar(0)) ++working;
  Dyn sub(4, working);
  for (int i = 0, c = 0; i < kNumThrusters; ++i) {
    if (!(d[i] > Scalar(0))) continue;
    for (int r = 0; r < 4; ++r) sub(r, c) = k(static_cast<int>(kControlledAxes[static_cast<std::size_t>(r)]), i);
    ++c;
  }
  Controllability out;
  out.rank = numerical_rank<Scalar>(sub);
  out.capable = out.rank == 4;
  if (working == 0) return out;
  const Scalar scale = sub.norm();
  Eigen::CompleteOrthogonalDecomposition<Dyn> cod(sub);
  for (int r = 0; r < 4; ++r) {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> e = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(4);
    e(r) = Scalar(1);
    const auto u = cod.solve(e);
    out.axis_reachable[static_cast<std::size_t>(r)] =
        (sub * u - e).norm() <= Scalar(kRankThreshold) * std::max(Scalar(1), scale);
  }
  return out;
}

/// Stateful convenience wrapper: fixed K and limits, degradation per call.
template <typename Scalar = double>
class ThrustAllocator {
 public:
  explicit ThrustAllocator(Matrix6<Scalar> k, ThrusterLimits<Scalar> limits = {})
      : k_(std::move(k)), limits_(std::move(limits)) {
    limits_.validate();
  }

  const Matrix6<Scalar>& matrix() const { return k_; }
  const ThrusterLimits<Scalar>& limits() const { return limits_; }

  AllocationResult<Scalar> allocate(const Wrench<Scalar>& tau, const DegradationVector<Scalar>& d) const {
    return allocate_constrained(k_, tau, d, limits_);
  }

 private:
  Matrix6<Scalar> k_;
  ThrusterLimits<Scalar> limits_;
};

using DegradationVectord = DegradationVector<double>;
using ThrusterLimitsd = ThrusterLimits<double>;

}  // namespace netpen::allocation
