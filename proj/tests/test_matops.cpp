#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "levyou/errors.hpp"
#include "levyou/matops.hpp"

using namespace levyou;

namespace {

Eigen::MatrixXd kinetic_B() {
  Eigen::MatrixXd B(2, 2);
  B << -1, 3.0 / 16, -1, 0;
  return B;
}

Eigen::MatrixXd kinetic_Q() {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2, 2);
  Q(0, 0) = 2;
  return Q;
}

Eigen::MatrixXd random_stable(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = n(rng) / std::sqrt(double(d));
  A.diagonal().array() -= spectral_abscissa(A) + 0.3;
  return A;
}

}  // namespace

TEST(Expm, ScalarCases) {
  Eigen::MatrixXd B(1, 1);
  B << -1;
  EXPECT_DOUBLE_EQ(expm(B, 0.0)(0, 0), 1.0);
  EXPECT_NEAR(expm(B, std::log(2.0))(0, 0), 0.5, 1e-15);
}

TEST(Expm, KineticEigenvalues) {
  const double t = 1.7;
  Eigen::EigenSolver<Eigen::MatrixXd> es(expm(kinetic_B(), t));
  std::vector<double> ev{es.eigenvalues()(0).real(), es.eigenvalues()(1).real()};
  std::sort(ev.begin(), ev.end());
  EXPECT_NEAR(ev[0], std::exp(-0.75 * t), 1e-13);
  EXPECT_NEAR(ev[1], std::exp(-0.25 * t), 1e-13);
}

TEST(Expm, GroupLawProperty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0, 2);
  std::normal_distribution<double> n;
  for (int i = 0; i < 100; ++i) {
    const int d = 1 + i % 4;
    Eigen::MatrixXd B(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) B(r, c) = n(rng);
    const double s = u(rng), t = u(rng);
    const Eigen::MatrixXd whole = expm(B, s + t);
    EXPECT_LE((whole - expm(B, s) * expm(B, t)).cwiseAbs().maxCoeff(), 1e-11 * whole.cwiseAbs().maxCoeff());
  }
}

TEST(GramQt, ScalarClosedForm) {
  Eigen::MatrixXd Q(1, 1), B(1, 1);
  Q << 2;
  B << -1;
  EXPECT_EQ(gram_qt(Q, B, 0.0)(0, 0), 0.0);
  EXPECT_NEAR(gram_qt(Q, B, 1.0)(0, 0), 1 - std::exp(-2.0), 1e-13);
}

TEST(GramQt, KineticLyapunovIdentity) {
  const Eigen::MatrixXd Q = kinetic_Q(), B = kinetic_B();
  const Eigen::MatrixXd Qi = qinf(Q, B);
  for (double t : {0.1, 1.0, 10.0}) {
    const Eigen::MatrixXd E = expm(B, t);
    EXPECT_LE((gram_qt(Q, B, t) - (Qi - E * Qi * E.transpose())).cwiseAbs().maxCoeff(), 1e-10) << "t = " << t;
  }
}

TEST(GramQt, ConvergesToQinf) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int i = 0; i < 12; ++i) {
    const int d = 1 + i % 4;
    const Eigen::MatrixXd B = random_stable(rng, d);
    Eigen::MatrixXd C(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) C(r, c) = n(rng);
    const Eigen::MatrixXd Q = C * C.transpose();
    const double t = 40.0 / std::abs(spectral_abscissa(B));
    EXPECT_LE((gram_qt(Q, B, t) - qinf(Q, B)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Qinf, ScalarAndKinetic) {
  Eigen::MatrixXd Q(1, 1), B(1, 1);
  Q << 3;
  B << -1.5;
  EXPECT_NEAR(qinf(Q, B)(0, 0), 1.0, 1e-15);
  const Eigen::MatrixXd K = qinf(kinetic_Q(), kinetic_B());
  EXPECT_NEAR(K(0, 0), 1.0, 1e-12);
  EXPECT_NEAR(K(1, 1), 16.0 / 3, 1e-12);
  EXPECT_NEAR(K(0, 1), 0.0, 1e-12);
  EXPECT_EQ(qinf(Eigen::MatrixXd::Zero(2, 2), kinetic_B()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Qinf, ResidualProperty) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> n;
  for (int i = 0; i < 30; ++i) {
    const int d = 1 + i % 4;
    const Eigen::MatrixXd B = random_stable(rng, d);
    Eigen::MatrixXd C(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) C(r, c) = n(rng);
    const Eigen::MatrixXd Q = C * C.transpose();
    const Eigen::MatrixXd X = qinf(Q, B);
    EXPECT_LE((B * X + X * B.transpose() + Q).cwiseAbs().maxCoeff(), 1e-10 * (1 + Q.cwiseAbs().maxCoeff()));
  }
}

TEST(Qinf, UnstableDriftThrows) {
  Eigen::MatrixXd B(1, 1);
  B << 0.5;
  try {
    qinf(Eigen::MatrixXd::Identity(1, 1), B);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnstableDrift);
  }
}

TEST(Kalman, Indices) {
  EXPECT_EQ(kalman_index(Eigen::MatrixXd::Identity(2, 2), kinetic_B()), 0);
  EXPECT_EQ(kalman_index(kinetic_Q(), kinetic_B()), 1);
  for (double c : {1e-4, 3.0, 1e4}) EXPECT_EQ(kalman_index(Eigen::MatrixXd(c * kinetic_Q()), kinetic_B()), 1);
  try {
    kalman_index(Eigen::MatrixXd::Zero(2, 2), kinetic_B());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HypoellipticityFailure);
  }
}

TEST(SpectralData, DiagonalAndJordan) {
  Eigen::MatrixXd D(2, 2);
  D << -1, 0, 0, -2;
  const SpectralData s = spectral_data(D);
  EXPECT_TRUE(s.diagonalizable);
  EXPECT_NEAR(s.abscissa, -1, 1e-14);
  EXPECT_NEAR(s.rates(0), 1, 1e-14);
  EXPECT_NEAR(s.rates(1), 2, 1e-14);

  Eigen::MatrixXd J(2, 2);
  J << -1, 1, 0, -1;
  EXPECT_FALSE(spectral_data(J).diagonalizable);
}

TEST(SpectralData, KineticRatesAndConjugation) {
  const Eigen::MatrixXd B = kinetic_B();
  const SpectralData s = spectral_data(B, qinf(kinetic_Q(), B));
  ASSERT_TRUE(s.diagonalizable && s.real_spectrum);
  EXPECT_NEAR(s.rates(0), 0.25, 1e-13);
  EXPECT_NEAR(s.rates(1), 0.75, 1e-13);
  const Eigen::MatrixXd conj = *s.M * B * *s.M_inv;
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(2, 2);
  want.diagonal() = -s.rates;
  EXPECT_LE((conj - want).cwiseAbs().maxCoeff(), 1e-10);
  ASSERT_TRUE(s.varrho.has_value());
  const Eigen::MatrixXd Qi = qinf(kinetic_Q(), B);
  const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(*s.M * Qi * s.M->transpose()).eigenvalues()(0);
  EXPECT_NEAR(*s.varrho, 0.25 * lmin, 1e-13);
}

TEST(DecayHorizon, BoundsTheFlow) {
  const double T = decay_horizon(-0.25);
  EXPECT_LE(std::exp(-0.25 * T), 1e-14);
}
