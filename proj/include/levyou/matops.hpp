#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "levyou/errors.hpp"
#include "levyou/quadrature.hpp"

namespace levyou {

template <class Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr double kRankTolerance = 1e-10;

// Number of singular values above rel_tol times the largest one.
template <class Derived>
int numerical_rank(const Eigen::MatrixBase<Derived>& m, double rel_tol = kRankTolerance) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<PlainMatrix<Derived>> svd(m.eval());
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

// e^{tB}; Pade-13 scaling and squaring from Eigen's MatrixFunctions.
template <class Derived>
PlainMatrix<Derived> expm(const Eigen::MatrixBase<Derived>& B, typename Derived::Scalar t = 1) {
  const PlainMatrix<Derived> tb = t * B;
  return tb.exp();
}

template <class Derived>
typename Derived::Scalar spectral_abscissa(const Eigen::MatrixBase<Derived>& B) {
  Eigen::EigenSolver<PlainMatrix<Derived>> es(B.eval(), false);
  return es.eigenvalues().real().maxCoeff();
}

// Symmetric square root of a positive semidefinite matrix; tiny negative
// eigenvalues from roundoff are clamped to zero.
template <class Derived>
PlainMatrix<Derived> psd_sqrt(const Eigen::MatrixBase<Derived>& Q) {
  using Scalar = typename Derived::Scalar;
  Eigen::SelfAdjointEigenSolver<PlainMatrix<Derived>> es(0.5 * (Q + Q.transpose()));
  auto ev = es.eigenvalues().unaryExpr([](Scalar v) { return v > Scalar(0) ? std::sqrt(v) : Scalar(0); });
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

// Q_t = int_0^t e^{sB} Q e^{sB^T} ds by composite Gauss-Legendre, panels doubled
// until successive estimates agree to 1e-12.
template <class DQ, class DB>
PlainMatrix<DQ> gram_qt(const Eigen::MatrixBase<DQ>& Q, const Eigen::MatrixBase<DB>& B,
                        typename DQ::Scalar t) {
  using M = PlainMatrix<DQ>;
  if (t < 0) throw Error(ErrorKind::InvalidArgument, "gram_qt needs t >= 0");
  const M q = Q;
  const M b = B;
  if (t == 0) return M::Zero(q.rows(), q.cols());
  auto integrand = [&](double s) -> M {
    const M e = expm(b, s);
    return e * q * e.transpose();
  };
  auto norm = [](const auto& m) { return static_cast<double>(m.cwiseAbs().maxCoeff()); };
  M out = quad::integrate(integrand, 0.0, static_cast<double>(t), norm, {1e-12, 14});
  return 0.5 * (out + out.transpose());
}

// Unique solution of B X + X B^T = -Q for a stable B, via the Kronecker form
// (I (x) B + B (x) I) vec X = -vec Q.
template <class DQ, class DB>
PlainMatrix<DQ> qinf(const Eigen::MatrixBase<DQ>& Q, const Eigen::MatrixBase<DB>& B) {
  using M = PlainMatrix<DQ>;
  if (spectral_abscissa(B) >= 0) throw Error(ErrorKind::UnstableDrift, "s(B) >= 0");
  const Eigen::Index d = B.rows();
  M K = M::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    K.block(i * d, i * d, d, d) += B;
    for (Eigen::Index j = 0; j < d; ++j)
      K.block(i * d, j * d, d, d).diagonal().array() += B(i, j);
  }
  using V = Eigen::Matrix<typename DQ::Scalar, Eigen::Dynamic, 1>;
  const M q = Q;
  const V rhs = -Eigen::Map<const V>(q.data(), d * d);
  V x = K.fullPivLu().solve(rhs);
  M X = Eigen::Map<M>(x.data(), d, d);
  return 0.5 * (X + X.transpose());
}

// Smallest n with rank[Q^{1/2}, B Q^{1/2}, ..., B^n Q^{1/2}] = d.
template <class DQ, class DB>
int kalman_index(const Eigen::MatrixBase<DQ>& Q, const Eigen::MatrixBase<DB>& B) {
  using M = PlainMatrix<DQ>;
  const Eigen::Index d = B.rows();
  const M root = psd_sqrt(Q);
  M block = root;
  M stacked = root;
  for (int n = 0; n < d; ++n) {
    if (numerical_rank(stacked) == d) return n;
    block = B * block;
    M next(d, stacked.cols() + d);
    next << stacked, block;
    stacked = std::move(next);
  }
  throw Error(ErrorKind::HypoellipticityFailure, "Kalman rank condition fails for every n < d");
}

// Time after which e^{(s(B)+eps) t} drops below tol, with eps = |s(B)|/100.
double decay_horizon(double abscissa, double tol = 1e-14);

struct SpectralData {
  Eigen::VectorXcd eigenvalues;
  double abscissa = 0;
  bool real_spectrum = false;
  bool diagonalizable = false;
  Eigen::VectorXd rates;                 // -Re(eigenvalue), ascending
  std::optional<Eigen::MatrixXd> M;      // M B M^{-1} = diag(-rates)
  std::optional<Eigen::MatrixXd> M_inv;
  std::optional<double> varrho;          // smallest eigenvalue of rates(0) M Q_inf M^T

  struct EigenGroup {
    std::complex<double> value;
    int algebraic = 0;
    int geometric = 0;
  };
  std::vector<EigenGroup> groups;
};

SpectralData spectral_data(const Eigen::MatrixXd& B, const std::optional<Eigen::MatrixXd>& Q_inf = {});

}  // namespace levyou
