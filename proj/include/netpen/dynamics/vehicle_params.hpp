#pragma once

#include "netpen/core/types.hpp"

#include <stdexcept>
#include <string>

namespace netpen::dynamics {

inline constexpr double kGravity = 9.81;

/// Rigid-body and hydrodynamic constants of the vehicle.
///
/// Added-mass entries are stored as positive magnitudes. Damping
/// coefficients keep the hydrodynamic-derivative sign convention and are
/// therefore <= 0.
template <typename Scalar = double>
struct VehicleParams {
  Scalar mass{11.26};
  Scalar Ix{0.30};
  Scalar Iy{0.63};
  Scalar Iz{0.58};

  Scalar Xdu{1.72};
  Scalar Ydv{0.0};
  Scalar Zdw{5.47};
  Scalar Kdp{0.0};
  Scalar Mdq{1.25};
  Scalar Ndr{0.40};

  Scalar Xu{-11.74};
  Scalar Yv{-20.0};
  Scalar Zw{-31.87};
  Scalar Kp{-25.0};
  Scalar Mq{-44.91};
  Scalar Nr{-5.0};

  Scalar Xuu{-18.18};
  Scalar Yvv{-21.66};
  Scalar Zww{0.0};  // not tabulated for the platform
  Scalar Kpp{0.0};  // not tabulated for the platform
  Scalar Mqq{0.0};  // not tabulated for the platform
  Scalar Nrr{-1.55};

  Scalar weight{Scalar(11.26 * kGravity)};
  Scalar buoyancy{Scalar(11.26 * kGravity)};
  Scalar zg{0.0};

  // Vector from the body origin to the centre of gravity; zero keeps the
  // origin at CG and the H(r_bg) transform at identity.
  Vector3<Scalar> r_bg{Vector3<Scalar>::Zero()};

  /// The tabulated BlueROV2 set with neutral buoyancy and z_g = 0.
  static VehicleParams bluerov2() { return VehicleParams{}; }

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw std::invalid_argument(std::string("VehicleParams: ") + what);
    };
    require(mass > Scalar(0), "mass must be positive");
    require(Ix > Scalar(0) && Iy > Scalar(0) && Iz > Scalar(0), "inertias must be positive");
    require(Xdu >= Scalar(0) && Ydv >= Scalar(0) && Zdw >= Scalar(0) && Kdp >= Scalar(0) &&
                Mdq >= Scalar(0) && Ndr >= Scalar(0),
            "added-mass magnitudes must be non-negative");
    require(Xu <= Scalar(0) && Yv <= Scalar(0) && Zw <= Scalar(0) && Kp <= Scalar(0) &&
                Mq <= Scalar(0) && Nr <= Scalar(0),
            "linear damping coefficients must be <= 0");
    require(Xuu <= Scalar(0) && Yvv <= Scalar(0) && Zww <= Scalar(0) && Kpp <= Scalar(0) &&
                Mqq <= Scalar(0) && Nrr <= Scalar(0),
            "quadratic damping coefficients must be <= 0");
    require(weight >= Scalar(0) && buoyancy >= Scalar(0), "weight and buoyancy must be >= 0");
  }
};

using VehicleParamsd = VehicleParams<double>;

}  // namespace netpen::dynamics
