#pragma once

// Small reference models shared by the test files.

#include "levyou/levy.hpp"
#include "levyou/model.hpp"

namespace testmodels {

using namespace levyou;

inline Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

inline OuModel gauss1d(double q = 2.0, double b = 1.0) {
  Eigen::MatrixXd Q(1, 1), B(1, 1);
  Q << q;
  B << -b;
  return OuModel(Q, B, LevyMeasure::null(1));
}

inline OuModel cp1d(double sigma2 = 1.0, double b = 1.0, double lambda = 1.5) {
  Eigen::MatrixXd Q(1, 1), B(1, 1);
  Q << sigma2;
  B << -b;
  return OuModel(Q, B, LevyMeasure(1, FiniteAtomic{{{v1(1.0), lambda}}}));
}

inline OuModel stable1d(double alpha = 1.5) {
  Eigen::MatrixXd Q(1, 1), B(1, 1);
  Q << 1;
  B << -1;
  return OuModel(Q, B, LevyMeasure(1, AlphaStable{alpha, {{v1(1.0), 0.5}, {v1(-1.0), 0.5}}}));
}

// Degenerate diffusion on (position, velocity) with Q_inf = diag(1, 16/3).
inline OuModel kinetic() {
  Eigen::MatrixXd Q(2, 2), B(2, 2);
  Q << 2, 0, 0, 0;
  B << -1, 3.0 / 16, -1, 0;
  return OuModel(Q, B, LevyMeasure::null(2));
}

inline OuModel diag2(double a = 1, double b = 2) {
  Eigen::MatrixXd Q = Eigen::MatrixXd::Identity(2, 2) * 2;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(2, 2);
  B(0, 0) = -a;
  B(1, 1) = -b;
  return OuModel(Q, B, LevyMeasure::null(2));
}

}  // namespace testmodels
