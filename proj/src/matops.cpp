#include "levyou/matops.hpp"

#include <algorithm>
#include <numbers>

namespace levyou {

namespace quad {

const Rule& gauss_legendre() {
  static const Rule rule = [] {
    Rule r;
    constexpr int n = kRuleSize;
    for (int i = 0; i < n; ++i) {
      double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double dp = 0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1, p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1);
        const double dx = p1 / dp;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      r.nodes[i] = x;
      r.weights[i] = 2.0 / ((1 - x * x) * dp * dp);
    }
    return r;
  }();
  return rule;
}

}  // namespace quad

double decay_horizon(double abscissa, double tol) {
  if (abscissa >= 0) throw Error(ErrorKind::UnstableDrift, "decay horizon needs s(B) < 0");
  const double eps = std::abs(abscissa) / 100.0;
  return std::log(tol) / (abscissa + eps);
}

namespace {

constexpr double kClusterTol = 1e-6;
constexpr double kImagTol = 1e-8;

// Orthonormal basis of the numerical kernel of A.
Eigen::MatrixXd kernel_basis(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double top = s.size() ? s(0) : 0.0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (top > 0 && s(i) > kRankTolerance * top) ++rank;
  const int nullity = static_cast<int>(A.cols()) - rank;
  return svd.matrixV().rightCols(nullity);
}

}  // namespace

SpectralData spectral_data(const Eigen::MatrixXd& B, const std::optional<Eigen::MatrixXd>& Q_inf) {
  const Eigen::Index d = B.rows();
  SpectralData out;
  Eigen::EigenSolver<Eigen::MatrixXd> es(B, false);
  out.eigenvalues = es.eigenvalues();
  out.abscissa = out.eigenvalues.real().maxCoeff();

  std::vector<std::complex<double>> ev(out.eigenvalues.data(), out.eigenvalues.data() + d);
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });

  // Cluster numerically coincident eigenvalues (Jordan blocks split by ~sqrt(eps)).
  std::vector<std::vector<std::complex<double>>> clusters;
  for (const auto& v : ev) {
    bool placed = false;
    for (auto& c : clusters) {
      std::complex<double> mean = 0;
      for (const auto& w : c) mean += w;
      mean /= static_cast<double>(c.size());
      if (std::abs(v - mean) <= kClusterTol * (1 + std::abs(mean))) {
        c.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({v});
  }

  out.real_spectrum = true;
  out.diagonalizable = true;
  std::vector<Eigen::MatrixXd> bases;
  for (const auto& c : clusters) {
    std::complex<double> mean = 0;
    for (const auto& w : c) mean += w;
    mean /= static_cast<double>(c.size());
    SpectralData::EigenGroup g;
    g.algebraic = static_cast<int>(c.size());
    if (std::abs(mean.imag()) <= kImagTol * (1 + std::abs(mean))) {
      g.value = mean.real();
      Eigen::MatrixXd shifted = B - mean.real() * Eigen::MatrixXd::Identity(d, d);
      Eigen::MatrixXd basis = kernel_basis(shifted);
      g.geometric = static_cast<int>(basis.cols());
      bases.push_back(basis);
    } else {
      out.real_spectrum = false;
      g.value = mean;
      Eigen::MatrixXcd shifted = B.cast<std::complex<double>>() - mean * Eigen::MatrixXcd::Identity(d, d);
      g.geometric = static_cast<int>(d) - numerical_rank(shifted);
    }
    if (g.geometric != g.algebraic) out.diagonalizable = false;
    out.groups.push_back(g);
  }

  out.rates = -out.eigenvalues.real();
  std::sort(out.rates.data(), out.rates.data() + d);

  if (out.real_spectrum && out.diagonalizable) {
    // Clusters are ordered by decreasing eigenvalue, i.e. increasing rate.
    Eigen::MatrixXd V(d, d);
    Eigen::Index col = 0;
    for (std::size_t k = 0; k < bases.size(); ++k) {
      for (Eigen::Index j = 0; j < bases[k].cols(); ++j) {
        Eigen::VectorXd v = bases[k].col(j).normalized();
        Eigen::Index imax;
        v.cwiseAbs().maxCoeff(&imax);
        if (v(imax) < 0) v = -v;
        V.col(col++) = v;
      }
      const double rate = -out.groups[k].value.real();
      for (int j = 0; j < out.groups[k].algebraic; ++j) out.rates(col - out.groups[k].algebraic + j) = rate;
    }
    out.M_inv = V;
    out.M = V.inverse();
    if (Q_inf) {
      const Eigen::MatrixXd S = (*out.M) * (*Q_inf) * out.M->transpose();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> se(0.5 * (S + S.transpose()));
      out.varrho = out.rates(0) * se.eigenvalues()(0);
    }
  }
  return out;
}

}  // namespace levyou
