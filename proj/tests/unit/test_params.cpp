#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "atmocirc/params.hpp"

using namespace atmocirc;

namespace {

PhysicalParams rayleigh_1000() {
  PhysicalParams p;
  p.nu = 1e-2;
  p.kappa_T = 1e-2;
  p.kappa_q = 2e-2;
  p.alpha_T = 1e-3;
  p.alpha_q = 5e-4;
  p.g = 10.0;
  p.h = 1.0;
  p.Omega = 0.0;
  p.sigma0 = 0.0;
  p.sigma1 = 0.0;
  p.T_bottom = 10.0;
  p.T_top = 0.0;
  p.q_bottom = 2.0;
  p.q_top = 1.0;
  return p;
}

}  // namespace

TEST(Nondimensionalize, EqualDiffusivitiesGiveUnitPrandtl) {
  PhysicalParams p = rayleigh_1000();
  p.Omega = 3.7;
  p.sigma0 = 0.2;
  EXPECT_EQ(nondimensionalize(p).Pr, 1.0);
}

TEST(Nondimensionalize, RayleighThousand) {
  const DimensionlessParams d = nondimensionalize(rayleigh_1000());
  // 10 * 1e-3 * 10 * 1 / (1e-2 * 1e-2)
  EXPECT_NEAR(d.R, 1000.0, 1000.0 * 4 * std::numeric_limits<double>::epsilon());
  EXPECT_DOUBLE_EQ(d.Le, 2.0);
  EXPECT_NEAR(d.R_tilde, 10 * 5e-4 * 1.0 / 1e-4, 1e-10);
}

TEST(Nondimensionalize, ZeroRotationAndFriction) {
  const DimensionlessParams d = nondimensionalize(rayleigh_1000());
  EXPECT_EQ(d.omega, 0.0);
  EXPECT_EQ(d.sigma0p, 0.0);
  EXPECT_EQ(d.sigma1p, 0.0);
  const Matrix2 s = friction_matrix(d);
  for (const auto& row : s)
    for (double v : row) EXPECT_EQ(v, 0.0);
}

TEST(Nondimensionalize, FrictionAndRotationScaling) {
  PhysicalParams p = rayleigh_1000();
  p.h = 2.0;
  p.sigma0 = 0.3;
  p.sigma1 = 0.4;
  p.Omega = 0.5;
  const DimensionlessParams d = nondimensionalize(p);
  EXPECT_DOUBLE_EQ(d.sigma0p, 0.3 * 4.0 / 1e-2);
  EXPECT_DOUBLE_EQ(d.sigma1p, 0.4 * 4.0 / 1e-2);
  EXPECT_DOUBLE_EQ(d.omega, 2.0 * 0.5 * 4.0 / 1e-2);
}

TEST(Nondimensionalize, HomogeneityInRotationAndHeight) {
  PhysicalParams p = rayleigh_1000();
  p.Omega = 0.7;
  const DimensionlessParams base = nondimensionalize(p);
  PhysicalParams twice_omega = p;
  twice_omega.Omega *= 2.0;
  EXPECT_EQ(nondimensionalize(twice_omega).omega, 2.0 * base.omega);
  PhysicalParams twice_h = p;
  twice_h.h *= 2.0;
  const DimensionlessParams d = nondimensionalize(twice_h);
  EXPECT_EQ(d.R, 8.0 * base.R);
  EXPECT_EQ(d.omega, 4.0 * base.omega);
}

TEST(Nondimensionalize, SwappingWallTemperaturesNegatesR) {
  PhysicalParams p = rayleigh_1000();
  p.Omega = 0.1;
  PhysicalParams q = p;
  std::swap(q.T_bottom, q.T_top);
  const DimensionlessParams a = nondimensionalize(p);
  const DimensionlessParams b = nondimensionalize(q);
  EXPECT_EQ(b.R, -a.R);
  EXPECT_EQ(b.Pr, a.Pr);
  EXPECT_EQ(b.Le, a.Le);
  EXPECT_EQ(b.omega, a.omega);
}

TEST(Nondimensionalize, RandomValidInputsGiveFiniteOutputs) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(1e-6, 10.0);
  std::uniform_real_distribution<double> any(-10.0, 10.0);
  for (int n = 0; n < 1000; ++n) {
    PhysicalParams p;
    p.nu = pos(rng);
    p.kappa_T = pos(rng);
    p.kappa_q = pos(rng);
    p.h = pos(rng);
    p.alpha_T = any(rng);
    p.alpha_q = any(rng);
    p.g = any(rng);
    p.Omega = any(rng);
    p.sigma0 = any(rng);
    p.sigma1 = any(rng);
    p.T_bottom = any(rng);
    p.T_top = p.T_bottom + pos(rng);
    p.q_bottom = any(rng);
    p.q_top = any(rng);
    const DimensionlessParams d = nondimensionalize(p);
    for (double v : {d.Pr, d.Le, d.R, d.R_tilde, d.sigma0p, d.sigma1p, d.omega})
      ASSERT_TRUE(std::isfinite(v));
  }
}

TEST(Nondimensionalize, RejectsBadInputsNamingTheField) {
  auto field_of = [](PhysicalParams p) {
    try {
      nondimensionalize(p);
    } catch (const ParameterError& e) {
      return e.field();
    }
    return std::string("none");
  };
  PhysicalParams p = rayleigh_1000();
  p.nu = 0.0;
  EXPECT_EQ(field_of(p), "nu");
  p = rayleigh_1000();
  p.kappa_T = -1.0;
  EXPECT_EQ(field_of(p), "kappa_T");
  p = rayleigh_1000();
  p.h = NAN;
  EXPECT_EQ(field_of(p), "h");
  p = rayleigh_1000();
  p.T_top = p.T_bottom;
  EXPECT_EQ(field_of(p), "T_bottom");
  p = rayleigh_1000();
  p.g = INFINITY;
  EXPECT_EQ(field_of(p), "g");
}

TEST(ScaleTime, Examples) {
  PhysicalParams p = rayleigh_1000();
  p.h = 1.0;
  p.kappa_T = 1.0;
  EXPECT_EQ(scale_time(p, 5.0), 5.0);
  EXPECT_EQ(scale_time(p, 0.0), 0.0);
  p.h = 2.0;
  p.kappa_T = 0.5;
  EXPECT_EQ(scale_time(p, 8.0), 1.0);
  EXPECT_EQ(time_scale(p), 8.0);
}

TEST(ScaleForcing, Examples) {
  PhysicalParams p = rayleigh_1000();
  const std::vector<double> zeros(5, 0.0);
  auto s = scale_forcing(p, zeros, zeros);
  for (double v : s.Q) EXPECT_EQ(v, 0.0);
  for (double v : s.G) EXPECT_EQ(v, 0.0);

  p.h = 1.0;
  p.kappa_T = 1.0;
  p.T_bottom = 1.0;
  p.T_top = 0.0;
  const std::vector<double> three{3.0};
  EXPECT_EQ(scale_forcing(p, three, three).Q[0], 3.0);

  p.h = 2.0;
  p.kappa_T = 0.5;
  p.T_bottom = 4.0;
  const std::vector<double> one{1.0};
  EXPECT_EQ(scale_forcing(p, one, one).Q[0], 2.0);
}

TEST(ScaleForcing, HumidityScalingSwitch) {
  PhysicalParams p = rayleigh_1000();
  p.h = 2.0;
  p.kappa_T = 0.5;
  p.T_bottom = 4.0;
  p.T_top = 0.0;
  p.q_bottom = 1.0;
  p.q_top = 0.0;
  const std::vector<double> one{1.0};
  // paper: G divided by the temperature difference, like Q
  EXPECT_EQ(scale_forcing(p, one, one, HumiditySourceScaling::paper).G[0], 2.0);
  // symmetric: G divided by the humidity difference
  EXPECT_EQ(scale_forcing(p, one, one, HumiditySourceScaling::symmetric).G[0], 8.0);
  p.T_top = p.T_bottom;
  EXPECT_THROW(scale_forcing(p, one, one), ParameterError);
}

TEST(FieldMaps, RoundTripAndProfiles) {
  const PhysicalParams p = rayleigh_1000();
  // Nondimensional zero is the conduction profile.
  EXPECT_DOUBLE_EQ(temperature_to_dimensional(p, 0.0, 0.0), 10.0);
  EXPECT_DOUBLE_EQ(temperature_to_dimensional(p, 0.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(humidity_to_dimensional(p, 0.0, 0.5), 1.5);
  for (double x2 : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(temperature_to_nondimensional(p, temperature_to_dimensional(p, 0.25, x2), x2),
                0.25, 1e-14);
    EXPECT_NEAR(humidity_to_nondimensional(p, humidity_to_dimensional(p, -0.5, x2), x2), -0.5,
                1e-14);
  }
  EXPECT_DOUBLE_EQ(velocity_to_dimensional(p, 2.0), 2.0 * 1e-2 / 1.0);
  EXPECT_DOUBLE_EQ(velocity_to_nondimensional(p, velocity_to_dimensional(p, 2.0)), 2.0);
  EXPECT_DOUBLE_EQ(kinematic_pressure_scale(p), 1e-4);
}

TEST(FrictionMatrix, SignConventions) {
  DimensionlessParams d;
  d.sigma0p = 1.0;
  d.sigma1p = 2.0;
  d.omega = 0.5;
  const Matrix2 paper = friction_matrix(d, CoriolisSign::paper);
  EXPECT_EQ(paper[0][1], 0.5);
  EXPECT_EQ(paper[1][0], 0.5);
  const Matrix2 anti = friction_matrix(d, CoriolisSign::antisymmetric);
  EXPECT_EQ(anti[0][1], 0.5);
  EXPECT_EQ(anti[1][0], -0.5);
}

TEST(FrictionMatrix, OperatorNorm) {
  // Symmetric: largest |eigenvalue|. [[1, .5], [.5, 2]] has eigenvalues 1.5 +- sqrt(.5).
  DimensionlessParams d;
  d.sigma0p = 1.0;
  d.sigma1p = 2.0;
  d.omega = 0.5;
  EXPECT_NEAR(operator_norm(friction_matrix(d)), 1.5 + std::sqrt(0.5), 1e-14);
  // Rotation-like [[0, w], [-w, 0]] has norm |w|.
  d = {};
  d.omega = -3.0;
  EXPECT_NEAR(operator_norm(friction_matrix(d, CoriolisSign::antisymmetric)), 3.0, 1e-14);
}

TEST(DimensionlessValidation, RejectsNonPositiveDiffusivityRatios) {
  DimensionlessParams d;
  d.Pr = 0.0;
  EXPECT_THROW(validate(d), ParameterError);
  d.Pr = 1.0;
  d.Le = -1.0;
  EXPECT_THROW(validate(d), ParameterError);
  d.Le = 1.0;
  d.R = NAN;
  EXPECT_THROW(validate(d), ParameterError);
}
