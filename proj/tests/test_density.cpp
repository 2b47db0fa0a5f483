#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levyou/density.hpp"
#include "levyou/errors.hpp"
#include "models.hpp"
#include "oracles.hpp"

using namespace levyou;
using testmodels::v1;

TEST(InvariantDensity, GaussianMatchesClosedForm) {
  const OuModel m = testmodels::gauss1d();  // mu = N(0, 1)
  const GridSpec g = default_grid(m);
  const DensityField mu = invariant_density(m, g);
  double err = 0;
  for (long k = 0; k < g.size(); ++k) err = std::max(err, std::abs(mu.values(k) - oracle::normal_pdf(g.node_at(k)(0))));
  EXPECT_LE(err, 1e-6);
  EXPECT_NEAR(mu.integral(), 1.0, 1e-4);
}

TEST(InvariantDensity, DefaultGridShape) {
  const GridSpec g1 = default_grid(testmodels::gauss1d());
  EXPECT_EQ(g1.points(), std::vector<int>{256});
  EXPECT_NEAR(g1.halfwidth()[0], 8.0, 1e-12);
  const GridSpec g2 = default_grid(testmodels::kinetic());
  EXPECT_EQ(g2.points(), (std::vector<int>{256, 256}));
  EXPECT_NEAR(g2.halfwidth()[1], 8 * std::sqrt(16.0 / 3.0), 1e-9);
}

TEST(InvariantDensity, KineticIsProductGaussian) {
  const OuModel m = testmodels::kinetic();
  const GridSpec g({8.0, 20.0}, {64, 128});
  const DensityField mu = invariant_density(m, g);
  double err = 0;
  for (long k = 0; k < g.size(); ++k) {
    const Eigen::VectorXd x = g.node_at(k);
    err = std::max(err, std::abs(mu.values(k) - oracle::normal_pdf(x(0)) * oracle::normal_pdf(x(1), 16.0 / 3.0)));
  }
  EXPECT_LE(err, 1e-8);
  EXPECT_NEAR(mu.integral(), 1.0, 1e-4);
}

TEST(InvariantDensity, MassAndPositivityForJumpModels) {
  for (const OuModel& m : {testmodels::cp1d(), testmodels::stable1d()}) {
    const GridSpec g = m.pi().is_stable() ? GridSpec::uniform(1, 64, 1024) : default_grid(m);
    const DensityField mu = invariant_density(m, g);
    EXPECT_NEAR(mu.integral(), 1.0, 1e-4);
    EXPECT_GT(mu.values.minCoeff(), -1e-8);
  }
}

TEST(DensityDerivative, GaussianFirstDerivative) {
  const OuModel m = testmodels::gauss1d();
  const GridSpec g = default_grid(m);
  const DensityField d1 = density_derivative(m, g, MultiIndex{1});
  double err = 0;
  for (long k = 0; k < g.size(); ++k) {
    const double x = g.node_at(k)(0);
    err = std::max(err, std::abs(d1.values(k) + x * oracle::normal_pdf(x)));
  }
  EXPECT_LE(err, 1e-6);
}

TEST(DensityDerivative, IntegratesToZero) {
  const OuModel m = testmodels::cp1d();
  const GridSpec g = default_grid(m);
  for (int n = 1; n <= 3; ++n) EXPECT_NEAR(density_derivative(m, g, MultiIndex{n}).integral(), 0.0, 1e-8);
}

TEST(DensityFromCf, TooCoarseGridThrows) {
  const GridSpec g = GridSpec::uniform(1, 4.0, 16);
  auto slow = [](const Eigen::VectorXd& xi) { return cplx(std::exp(-0.01 * xi.squaredNorm())); };
  try {
    density_from_cf(g, slow);
    FAIL() << "expected GridTooCoarse";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridTooCoarse);
  }
}

TEST(Transform, ForwardInverseRoundTrip) {
  const GridSpec g({6.0, 5.0}, {32, 16});
  Eigen::VectorXcd f(g.size());
  for (long k = 0; k < g.size(); ++k) {
    const Eigen::VectorXd x = g.node_at(k);
    f(k) = cplx(std::exp(-x.squaredNorm()), x(0) * std::exp(-x.squaredNorm()));
  }
  const Eigen::VectorXcd back = inverse_transform(g, forward_transform(g, f));
  EXPECT_LE((back - f).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Interpolate, ExactOnCubics) {
  const GridSpec g({3.0, 2.0}, {16, 8});
  auto p = [](const Eigen::VectorXd& x) { return 1 + x(0) - 2 * x(0) * x(0) * x(1) + x(1) * x(1) * x(1); };
  DensityField f{g, Eigen::VectorXd(g.size()), "p"};
  for (long k = 0; k < g.size(); ++k) f.values(k) = p(g.node_at(k));
  for (const auto& pt : {Eigen::Vector2d(0.1, 0.2), Eigen::Vector2d(-2.9, 1.4), Eigen::Vector2d(2.5, -1.99)})
    EXPECT_NEAR(interpolate(f, pt), p(pt), 1e-12);
  try {
    interpolate(f, Eigen::Vector2d(3.5, 0.0));
    FAIL() << "expected InterpolationOutOfRange";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InterpolationOutOfRange);
  }
}

TEST(TransitionDensity, GaussianClosedForm) {
  const OuModel m = testmodels::gauss1d();
  const GridSpec g = default_grid(m);
  const double t = 0.7, x0 = 1.3;
  const DensityField p = transition_density(m, t, v1(x0), g);
  const double mean = std::exp(-t) * x0, var = 1 - std::exp(-2 * t);
  double err = 0;
  for (long k = 0; k < g.size(); ++k) {
    const double y = g.node_at(k)(0);
    err = std::max(err, std::abs(p.values(k) - oracle::normal_pdf(y - mean, var)));
  }
  EXPECT_LE(err, 1e-6);
}

TEST(TransitionDensity, LongTimeApproachesInvariant) {
  const OuModel m = testmodels::cp1d();
  const GridSpec g = default_grid(m);
  const double t = 40.0 / std::abs(m.abscissa());
  const DensityField p = transition_density(m, t, v1(2.0), g);
  const DensityField mu = invariant_density(m, g);
  EXPECT_LE((p.values - mu.values).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(TransitionDensity, RejectsNonPositiveTime) {
  const OuModel m = testmodels::gauss1d();
  EXPECT_THROW(transition_density(m, 0.0, v1(0.0), default_grid(m)), Error);
}

TEST(SemigroupGrid, ConstantsAreFixed) {
  const OuModel m = testmodels::cp1d();
  const GridSpec g = default_grid(m);
  const DensityField one{g, Eigen::VectorXd::Ones(g.size()), "1"};
  const DensityField out = semigroup_apply_grid(m, 0.5, one);
  EXPECT_LE((out.values.array() - 1).abs().maxCoeff(), 1e-10);
}

TEST(SemigroupGrid, PlaneWaveMatchesCharacteristicFunction) {
  // cos(w x) with w on the dual lattice is periodic on the box, so the
  // spectral step is exact and only interpolation error remains.
  const OuModel m = testmodels::gauss1d();
  const GridSpec g = GridSpec::uniform(1, 8.0, 256);
  const double w = std::numbers::pi * 3 / 8.0, t = 0.4;
  DensityField f{g, Eigen::VectorXd(g.size()), "cos"};
  for (long k = 0; k < g.size(); ++k) f.values(k) = std::cos(w * g.node_at(k)(0));
  const DensityField out = semigroup_apply_grid(m, t, f);
  const double damp = std::exp(-0.5 * w * w * (1 - std::exp(-2 * t)));
  double err = 0;
  for (long k = 0; k < g.size(); ++k) {
    const double x = g.node_at(k)(0);
    err = std::max(err, std::abs(out.values(k) - damp * std::cos(w * std::exp(-t) * x)));
  }
  EXPECT_LE(err, 1e-5);
}

TEST(Marginal, KineticFirstAxisIsStandardNormal) {
  const OuModel m = testmodels::kinetic();
  const GridSpec g({8.0, 20.0}, {64, 128});
  const DensityField mx = marginal(invariant_density(m, g), 0);
  for (long k = 0; k < mx.grid.size(); ++k)
    EXPECT_NEAR(mx.values(k), oracle::normal_pdf(mx.grid.node_at(k)(0)), 1e-8);
}
