#include "netpen/allocation/allocation_matrix.hpp"
#include "netpen/core/errors.hpp"
#include "netpen/dynamics/model.hpp"
#include "netpen/dynamics/params_io.hpp"
#include "netpen/dynamics/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace netpen;
using namespace netpen::dynamics;

namespace {

VehicleModel<double> standard_model(VehicleParamsd params = VehicleParamsd::bluerov2()) {
  return VehicleModel<double>(params, allocation::standard_allocation_matrix<double>());
}

Vector6d random_vector(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Vector6d v;
  for (int i = 0; i < 6; ++i) v(i) = dist(rng);
  return v;
}

}  // namespace

TEST(MassMatrix, TabulatedEntries) {
  const auto m = mass_matrix(VehicleParamsd::bluerov2());
  EXPECT_NEAR(m(0, 0), 12.98, 1e-12);
  EXPECT_NEAR(m(2, 2), 16.73, 1e-12);
  EXPECT_NEAR(m(5, 5), 0.58 + 0.40, 1e-12);
  EXPECT_TRUE(m.isApprox(m.transpose(), 1e-15));
}

TEST(MassMatrix, PureRigidBody) {
  VehicleParamsd p;
  p.mass = 1;
  p.Ix = p.Iy = p.Iz = 1;
  p.Xdu = p.Ydv = p.Zdw = p.Kdp = p.Mdq = p.Ndr = 0;
  EXPECT_TRUE(mass_matrix(p).isApprox(Matrix6d::Identity(), 1e-15));
}

TEST(MassMatrix, CgOffsetCouplingIsSymmetric) {
  VehicleParamsd p;
  p.zg = 0.05;
  const auto m = mass_matrix(p);
  EXPECT_TRUE(m.isApprox(m.transpose(), 1e-15));
  EXPECT_NEAR(m(0, 4), p.mass * p.zg, 1e-12);
  EXPECT_NEAR(m(1, 3), -p.mass * p.zg, 1e-12);
  EXPECT_NEAR(m(3, 3), p.Ix + p.Kdp + p.mass * p.zg * p.zg, 1e-12);
}

TEST(MassMatrix, PositiveDefiniteForLargeCgOffset) {
  VehicleParamsd p;
  p.zg = 0.3;
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(mass_matrix(p));
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Step, BottomHeavyVehicleRightsItself) {
  auto p = VehicleParamsd::bluerov2();
  p.zg = 0.2;
  const auto model = standard_model(p);
  VehicleState<double> s;
  s.eta(3) = 0.3;
  s.eta(4) = -0.2;
  for (int i = 0; i < 3000; ++i) s = step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.01);
  EXPECT_LT(std::abs(s.eta(3)), 1e-3);
  EXPECT_LT(std::abs(s.eta(4)), 1e-3);
}

TEST(MassMatrix, SingularThrows) {
  VehicleParamsd p;
  p.mass = 1e-300;
  p.Xdu = 0;
  p.Ix = 1e-300;
  p.Kdp = 0;
  EXPECT_THROW(mass_matrix(p), SingularMatrix);
}

TEST(Coriolis, ZeroVelocity) {
  EXPECT_TRUE(coriolis_matrix(VehicleParamsd::bluerov2(), Vector6d::Zero()).isZero(0));
}

TEST(Coriolis, SurgeAddedMassEntry) {
  Vector6d nu = Vector6d::Zero();
  nu(0) = 1;
  const auto p = VehicleParamsd::bluerov2();
  const auto ca = coriolis_from_inertia(added_mass(p), nu);
  // Added-mass momentum X_du*u couples surge velocity into the sway/yaw block.
  EXPECT_NEAR(std::abs(ca(1, 5)), 1.72, 1e-12);
  EXPECT_NEAR(ca(1, 5), -ca(5, 1), 1e-15);
}

TEST(Coriolis, SkewSymmetricOnRandomVelocities) {
  std::mt19937_64 rng(7);
  const auto p = VehicleParamsd::bluerov2();
  for (int i = 0; i < 1000; ++i) {
    const auto c = coriolis_matrix(p, random_vector(rng, 3.0));
    EXPECT_LE((c + c.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Coriolis, DoesNoWork) {
  std::mt19937_64 rng(11);
  const auto p = VehicleParamsd::bluerov2();
  for (int i = 0; i < 100; ++i) {
    const auto nu = random_vector(rng, 2.0);
    EXPECT_NEAR(nu.dot(coriolis_matrix(p, nu) * nu), 0.0, 1e-11);
  }
}

TEST(Damping, TabulatedEntries) {
  const auto p = VehicleParamsd::bluerov2();
  EXPECT_NEAR(damping_matrix(p, Vector6d::Zero())(0, 0), 11.74, 1e-12);
  Vector6d nu = Vector6d::Zero();
  nu(0) = 1;
  EXPECT_NEAR(damping_matrix(p, nu)(0, 0), 29.92, 1e-12);
  nu(0) = -1;
  EXPECT_NEAR(damping_matrix(p, nu)(0, 0), 29.92, 1e-12);
}

TEST(Damping, NonNegativeDiagonal) {
  std::mt19937_64 rng(3);
  const auto p = VehicleParamsd::bluerov2();
  for (int i = 0; i < 100; ++i) {
    const auto d = damping_matrix(p, random_vector(rng, 2.0));
    EXPECT_TRUE(d.isDiagonal());
    EXPECT_GE(d.diagonal().minCoeff(), 0.0);
  }
}

TEST(Damping, ZeroCoefficients) {
  VehicleParamsd p;
  p.Xu = p.Yv = p.Zw = p.Kp = p.Mq = p.Nr = 0;
  p.Xuu = p.Yvv = p.Nrr = 0;
  Vector6d nu = Vector6d::Ones();
  EXPECT_TRUE(damping_matrix(p, nu).isZero(0));
}

TEST(Restoring, NeutralLevelHasNoForce) {
  const auto g = restoring_forces(VehicleParamsd::bluerov2(), Vector6d::Zero());
  EXPECT_TRUE(g.head<3>().isZero(0));
}

TEST(Restoring, PitchedNinetyDegrees) {
  VehicleParamsd p;
  p.weight = p.buoyancy + 1;
  Vector6d eta = Vector6d::Zero();
  eta(4) = std::numbers::pi / 2;
  EXPECT_NEAR(restoring_forces(p, eta)(0), 1.0, 1e-12);
}

TEST(Restoring, MatchesDirectTranscription) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-0.4, 0.4);
  VehicleParamsd p;
  p.weight = 112.0;
  p.buoyancy = 114.5;
  p.zg = 0.02;
  for (int i = 0; i < 200; ++i) {
    Vector6d eta = Vector6d::Zero();
    eta(3) = angle(rng);
    eta(4) = angle(rng);
    eta(5) = angle(rng);
    const double phi = eta(3), th = eta(4);
    const double wb = p.weight - p.buoyancy;
    const double zw = p.zg * p.weight;
    Vector6d expected;
    expected << wb * std::sin(th), -wb * std::cos(th) * std::sin(phi),
        -wb * std::cos(th) * std::cos(phi), zw * std::cos(th) * std::sin(phi), zw * std::sin(th), 0.0;
    EXPECT_LE((restoring_forces(p, eta) - expected).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Kinematics, LevelPoseIsIdentityRates) {
  Vector6d eta = Vector6d::Zero();
  const auto j = kinematic_transform(eta);
  EXPECT_TRUE(j.isApprox(Matrix6d::Identity(), 1e-15));
  eta(5) = 0.3;
  const auto jy = kinematic_transform(eta);
  EXPECT_TRUE((jy.bottomRightCorner<3, 3>().isApprox(Matrix3d::Identity(), 1e-15)));
  EXPECT_NEAR(jy(0, 0), std::cos(0.3), 1e-15);
  EXPECT_NEAR(jy(1, 0), std::sin(0.3), 1e-15);
}

TEST(Kinematics, GimbalLockGuard) {
  Vector6d eta = Vector6d::Zero();
  eta(4) = std::numbers::pi / 2;
  EXPECT_THROW(kinematic_transform(eta), GimbalLock);
  eta(4) = -std::numbers::pi / 2 + 1e-4;
  EXPECT_THROW(kinematic_transform(eta), GimbalLock);
}

TEST(Kinematics, RotationIsOrthonormal) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(-3.1, 3.1), t(-1.5, 1.5);
  for (int i = 0; i < 500; ++i) {
    const auto r = body_to_ned(a(rng), t(rng), a(rng));
    EXPECT_LE((r.transpose() * r - Matrix3d::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(r.determinant(), 1.0, 1e-12);
  }
}

TEST(Step, EquilibriumIsFixedPoint) {
  const auto model = standard_model();
  VehicleState<double> s;
  s.eta << 1, 2, 3, 0, 0, 0.5;
  for (int i = 0; i < 1000; ++i) {
    const auto next = step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.01);
    EXPECT_LT((next.eta - s.eta).norm(), 1e-9);
    s = next;
  }
}

TEST(Step, SurgeDecaysMonotonically) {
  const auto model = standard_model();
  VehicleState<double> s;
  s.nu(0) = 1.0;
  double prev = s.nu(0);
  for (int i = 0; i < 500; ++i) {
    s = step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.01);
    EXPECT_LT(s.nu(0), prev);
    EXPECT_GT(s.nu(0), 0.0);
    prev = s.nu(0);
  }
}

TEST(Step, KineticEnergyNonIncreasing) {
  const auto model = standard_model();
  std::mt19937_64 rng(21);
  VehicleState<double> s;
  s.nu = random_vector(rng, 0.5);
  double energy = kinetic_energy(model.mass(), s.nu);
  for (int i = 0; i < 1000; ++i) {
    s = step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.01);
    const double next = kinetic_energy(model.mass(), s.nu);
    EXPECT_LE(next, energy + 1e-9);
    energy = next;
  }
}

TEST(Step, HeaveMatchesClosedForm) {
  // Single-DOF heave with first-order thrust lag:
  //   m' w' = 2 T(t) + Zw w,  T(t) = Tc (1 - exp(-t / tau)).
  const auto params = VehicleParamsd::bluerov2();
  const auto model = standard_model(params);
  const double tc = 5.0, tau = 0.2, dt = 0.001;
  const double mh = params.mass + params.Zdw;
  const double a = -params.Zw / mh, b = 2 * tc / mh, c = 1 / tau;
  auto z_exact = [&](double t) {
    // w(t) = b/a - b/(a-c) e^{-ct} + (b/(a-c) - b/a) e^{-at}, integrated from 0.
    const double k1 = b / a, k2 = b / (a - c), k3 = k2 - k1;
    return k1 * t - k2 * (1 - std::exp(-c * t)) / c + k3 * (1 - std::exp(-a * t)) / a;
  };
  Vector6d cmd = Vector6d::Zero();
  cmd(4) = cmd(5) = tc;
  VehicleState<double> s;
  double prev_z = 0;
  const int n = 4000;
  for (int i = 1; i <= n; ++i) {
    s = step(model, s, cmd, Wrenchd::Zero(), dt);
    if (i > 500) EXPECT_GT(s.eta(2), prev_z);
    prev_z = s.eta(2);
  }
  const double expected = z_exact(n * dt);
  EXPECT_NEAR(s.eta(2), expected, 0.02 * expected);
  EXPECT_NEAR(s.eta(3), 0.0, 1e-9);
  EXPECT_NEAR(s.eta(4), 0.0, 1e-9);
}

TEST(Step, FourthOrderConvergence) {
  const auto model = standard_model();
  Vector6d cmd;
  cmd << 15, 15, 0, 0, 1, 1;
  auto run = [&](double dt) {
    VehicleState<double> s;
    const int n = static_cast<int>(std::lround(5.0 / dt));
    for (int i = 0; i < n; ++i) s = step(model, s, cmd, Wrenchd::Zero(), dt);
    Eigen::Matrix<double, 12, 1> x;
    x << s.eta, s.nu;
    return x;
  };
  const auto ref = run(0.05 / 16);
  const double e1 = (run(0.05) - ref).norm();
  const double e2 = (run(0.025) - ref).norm();
  EXPECT_GE(std::log2(e1 / e2), 4.0 - 0.5);
}

TEST(Step, RejectsBadStep) {
  const auto model = standard_model();
  VehicleState<double> s;
  EXPECT_THROW(step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.0), std::invalid_argument);
  EXPECT_THROW(step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.2), std::invalid_argument);
}

TEST(Step, AnglesStayWrapped) {
  const auto model = standard_model();
  VehicleState<double> s;
  s.eta(5) = 3.1;
  s.nu(5) = 1.0;
  for (int i = 0; i < 100; ++i) {
    s = step(model, s, Vector6d::Zero(), Wrenchd::Zero(), 0.01);
    EXPECT_GT(s.eta(5), -std::numbers::pi);
    EXPECT_LE(s.eta(5), std::numbers::pi);
  }
}

TEST(ParamsIo, RoundTrip) {
  auto p = VehicleParamsd::bluerov2();
  p.zg = 0.02;
  const auto q = parse_params(format_params(p));
  EXPECT_DOUBLE_EQ(q.mass, p.mass);
  EXPECT_DOUBLE_EQ(q.Xuu, p.Xuu);
  EXPECT_DOUBLE_EQ(q.zg, 0.02);
  EXPECT_DOUBLE_EQ(q.buoyancy, p.buoyancy);
}

TEST(ParamsIo, UnknownKeyIsSchemaError) {
  EXPECT_THROW(parse_params("m = 11\nbogus = 3\n"), SchemaError);
  EXPECT_THROW(parse_params("m = eleven\n"), SchemaError);
}

TEST(ParamsIo, MassImpliesNeutralBuoyancy) {
  const auto p = parse_params("# light vehicle\nm = 2\n");
  EXPECT_DOUBLE_EQ(p.weight, 2 * kGravity);
  EXPECT_DOUBLE_EQ(p.buoyancy, p.weight);
}
