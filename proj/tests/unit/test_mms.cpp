#include <gtest/gtest.h>

#include <cmath>

#include "atmocirc/mms.hpp"
#include "oracles.hpp"

using namespace atmocirc;
using oracle::pi;

namespace {

DimensionlessParams mms_params() { return MmsOptions{}.params; }

// Residual of each equation at a point, by finite differences of the exact fields.
PointValues residual_by_differences(const ManufacturedSolution& m, double x1, double x2, double t) {
  const DimensionlessParams& d = m.params();
  const Matrix2 sg = friction_matrix(d, m.sign());
  auto field = [&](int c) {
    return [&, c](double a, double b, double s) {
      const PointValues v = m.exact(a, b, s);
      return c == 0 ? v.u1 : c == 1 ? v.u2 : c == 2 ? v.T : v.q;
    };
  };
  const PointValues v = m.exact(x1, x2, t);
  double out[4];
  for (int c = 0; c < 4; ++c) {
    auto f = field(c);
    const double ft = oracle::derivative([&](double s) { return f(x1, x2, s); }, t);
    const double f1 = oracle::derivative([&](double a) { return f(a, x2, t); }, x1);
    const double f2 = oracle::derivative([&](double b) { return f(x1, b, t); }, x2);
    const double lap = oracle::second_derivative([&](double a) { return f(a, x2, t); }, x1) +
                       oracle::second_derivative([&](double b) { return f(x1, b, t); }, x2);
    out[c] = ft + v.u1 * f1 + v.u2 * f2;
    if (c == 0) out[c] -= d.Pr * (lap - (sg[0][0] * v.u1 + sg[0][1] * v.u2));
    if (c == 1)
      out[c] -= d.Pr * (lap - (sg[1][0] * v.u1 + sg[1][1] * v.u2)) + d.Pr * (d.R * v.T - d.R_tilde * v.q);
    if (c == 2) out[c] -= lap + v.u2;
    if (c == 3) out[c] -= d.Le * lap + v.u2;
  }
  return {out[0], out[1], out[2], out[3]};
}

}  // namespace

TEST(ManufacturedSolution, ExactFieldsSatisfyConstraints) {
  const ManufacturedSolution m(mms_params());
  for (double x1 : {0.0, 1.3, 4.0})
    for (double t : {0.0, 0.7}) {
      for (double x2 : {0.0, 1.0}) {
        const PointValues v = m.exact(x1, x2, t);
        EXPECT_NEAR(v.u1, 0.0, 1e-15);
        EXPECT_NEAR(v.u2, 0.0, 1e-15);
        EXPECT_NEAR(v.T, 0.0, 1e-15);
        EXPECT_NEAR(v.q, 0.0, 1e-15);
      }
      const double x2 = 0.37;
      const double div =
          oracle::derivative([&](double a) { return m.exact(a, x2, t).u1; }, x1) +
          oracle::derivative([&](double b) { return m.exact(x1, b, t).u2; }, x2);
      EXPECT_NEAR(div, 0.0, 1e-9);
    }
}

TEST(ManufacturedSolution, SourcesMatchFiniteDifferenceResidual) {
  for (CoriolisSign sign : {CoriolisSign::paper, CoriolisSign::antisymmetric}) {
    const ManufacturedSolution m(mms_params(), 1.3, sign);
    for (double x1 : {0.2, 2.5, 5.1})
      for (double x2 : {0.1, 0.45, 0.8})
        for (double t : {0.0, 0.3, 1.1}) {
          const PointValues a = m.sources(x1, x2, t);
          const PointValues b = residual_by_differences(m, x1, x2, t);
          EXPECT_NEAR(a.u1, b.u1, 1e-6 * (1 + std::abs(b.u1)));
          EXPECT_NEAR(a.u2, b.u2, 1e-6 * (1 + std::abs(b.u2)));
          EXPECT_NEAR(a.T, b.T, 1e-6 * (1 + std::abs(b.T)));
          EXPECT_NEAR(a.q, b.q, 1e-6 * (1 + std::abs(b.q)));
        }
  }
}

TEST(ManufacturedSolution, ZeroAmplitudeGivesZeroError) {
  const ManufacturedSolution m(mms_params(), 0.0);
  const MmsRun r = run_mms(m, Grid(16, 17), 1e-3, 0.02, DiffusionScheme::crank_nicolson);
  EXPECT_EQ(r.error.u1, 0.0);
  EXPECT_EQ(r.error.u2, 0.0);
  EXPECT_EQ(r.error.T, 0.0);
  EXPECT_EQ(r.error.q, 0.0);
}

TEST(ManufacturedSolution, TwoGridSpatialOrderForScalars) {
  const ManufacturedSolution m(mms_params());
  const Grid coarse(16, 17), fine(32, 33);
  const MmsRun a = run_mms(m, coarse, coarse.dx2() * coarse.dx2(), 0.1, DiffusionScheme::crank_nicolson);
  const MmsRun b = run_mms(m, fine, fine.dx2() * fine.dx2(), 0.1, DiffusionScheme::crank_nicolson);
  EXPECT_GE(std::log(a.error.T / b.error.T) / std::log(2.0), 1.9);
  EXPECT_GE(std::log(a.error.q / b.error.q) / std::log(2.0), 1.9);
  EXPECT_TRUE(a.walls_exact);
  EXPECT_LE(b.max_divergence_rel, 1e-8);
}

TEST(FittedOrder, RecoversKnownSlope) {
  const std::vector<double> h{0.1, 0.05, 0.025};
  const std::vector<double> e{3e-2, 3e-2 / 4, 3e-2 / 16};
  EXPECT_NEAR(fitted_order(h, e), 2.0, 1e-12);
}
