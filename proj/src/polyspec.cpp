#include "levyou/polyspec.hpp"

#include <cmath>

#include "levyou/errors.hpp"

namespace levyou {

namespace {

// Calls f(beta) for every beta <= alpha componentwise.
template <class F>
void for_each_dominated(const MultiIndex& alpha, F&& f) {
  const int d = alpha.dim();
  std::vector<int> beta(d, 0);
  while (true) {
    f(MultiIndex(beta));
    int j = d - 1;
    while (j >= 0 && beta[j] == alpha[j]) beta[j--] = 0;
    if (j < 0) return;
    ++beta[j];
  }
}

}  // namespace

MomentTable moments_from_cumulants(const CumulantTable& kappa) {
  const int d = kappa.dim();
  MomentTable m;
  m[MultiIndex::zero(d)] = 1.0;
  for (int k = 1; k <= kappa.max_order(); ++k) {
    for (const auto& gamma : multi_indices_of_order(d, k)) {
      int i = 0;
      while (gamma[i] == 0) ++i;
      const MultiIndex ei = MultiIndex::unit(d, i);
      const MultiIndex alpha = gamma - ei;
      double sum = 0, carry = 0;  // Kahan
      for_each_dominated(alpha, [&](const MultiIndex& beta) {
        const double term = binomial(alpha, beta) * kappa.at(beta + ei) * m.at(alpha - beta);
        const double y = term - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
      });
      m[gamma] = sum;
    }
  }
  return m;
}

MomentKernel::MomentKernel(CumulantTable cumulants, std::optional<Eigen::MatrixXd> pre_map)
    : cumulants_(std::move(cumulants)), moments_(moments_from_cumulants(cumulants_)), pre_map_(std::move(pre_map)) {
  if (pre_map_ && (pre_map_->rows() != dim() || pre_map_->cols() != dim()))
    throw Error(ErrorKind::InvalidArgument, "pre-map shape mismatch");
}

Poly shift_convolve(const MomentTable& moments, const Poly& p) {
  Poly out(p.dim());
  for (const auto& [alpha, c] : p.terms()) {
    for_each_dominated(alpha, [&](const MultiIndex& beta) {
      auto it = moments.find(alpha - beta);
      if (it == moments.end())
        throw Error(ErrorKind::IncompleteTable, "moment " + (alpha - beta).str() + " not tabulated");
      out.add_term(beta, c * binomial(alpha, beta) * it->second);
    });
  }
  return out;
}

Poly convolve_markov(const MomentKernel& kernel, const Poly& p) {
  if (p.dim() != kernel.dim()) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  if (p.degree() > kernel.max_order())
    throw Error(ErrorKind::IncompleteTable, "polynomial degree exceeds kernel moment order");
  Poly q = shift_convolve(kernel.moments(), p);
  return kernel.pre_map() ? compose_linear(q, *kernel.pre_map()) : q;
}

Poly invert_on_polys(const MomentKernel& kernel, const Poly& p) {
  if (p.is_zero()) return p;
  if (kernel.pre_map() && !kernel.pre_map()->fullPivLu().isInvertible())
    throw Error(ErrorKind::SingularPreMap, "kernel pre-map is singular");
  const int K = p.degree();
  const MonomialBasis basis(p.dim(), K);
  const Eigen::MatrixXd T = basis.operator_matrix([&](const Poly& q) { return convolve_markov(kernel, q); });
  const Eigen::VectorXd rhs = basis.coefficients(p);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(basis.size());
  for (int k = K; k >= 0; --k) {
    const auto [b, e] = basis.degree_block(k);
    const Eigen::VectorXd r = rhs.segment(b, e - b) - T.middleRows(b, e - b) * q;
    q.segment(b, e - b) = T.block(b, b, e - b, e - b).partialPivLu().solve(r);
  }
  return basis.to_poly(q);
}

MomentKernel build_lambda(const OuModel& model, const Eigen::MatrixXd& Q_tilde, int K) {
  const int d = model.dim();
  Eigen::MatrixXd Qt_inf = Eigen::MatrixXd::Zero(d, d);
  if (Q_tilde.cwiseAbs().maxCoeff() > 0) Qt_inf = qinf(Q_tilde, model.B());
  const Eigen::MatrixXd gap = model.q_inf() - Qt_inf;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gap);
  if (es.eigenvalues()(0) < -1e-10 * std::max(1.0, model.q_inf().norm()))
    throw Error(ErrorKind::OrderingViolated, "Q_inf - Qtilde_inf is not positive semidefinite");
  CumulantTable c = cumulants_mu(model, K);
  if (K >= 2) c.add_covariance(-Qt_inf);
  return MomentKernel(std::move(c));
}

namespace {

Eigen::VectorXd target_variances(const SpectralData& s) {
  return (*s.varrho) * s.rates.cwiseInverse();
}

const SpectralData& require_diagonal(const OuModel& model) {
  const auto& s = model.spectral();
  if (!s.M || !s.varrho) throw Error(ErrorKind::NotDiagonalizable, "B is not diagonalizable with real spectrum");
  return s;
}

}  // namespace

MomentKernel build_V(const OuModel& model, int K) {
  const auto& s = require_diagonal(model);
  const Eigen::MatrixXd& Minv = *s.M_inv;
  const Eigen::MatrixXd shrink = Minv * target_variances(s).asDiagonal() * Minv.transpose();
  const Eigen::MatrixXd gap = model.q_inf() - shrink;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gap + gap.transpose()));
  if (es.eigenvalues()(0) < -1e-10 * std::max(1.0, model.q_inf().norm()))
    throw Error(ErrorKind::OrderingViolated, "Gaussian block of h_V is not positive semidefinite");
  CumulantTable c = cumulants_mu(model, K);
  if (K >= 2) c.add_covariance(-shrink);
  return MomentKernel(std::move(c), Minv);
}

OuModel target_diffusion(const OuModel& model) {
  const auto& s = require_diagonal(model);
  const int d = model.dim();
  return OuModel(2.0 * (*s.varrho) * Eigen::MatrixXd::Identity(d, d), -s.rates.asDiagonal().toDenseMatrix(),
                 LevyMeasure::null(d));
}

Poly hermite_orthonormal(const MultiIndex& n, const Eigen::VectorXd& rates, double rho) {
  const int d = n.dim();
  if (rates.size() != d) throw Error(ErrorKind::InvalidArgument, "rates dimension mismatch");
  Poly out = Poly::constant(d, 1.0);
  for (int j = 0; j < d; ++j) {
    const int k = n[j];
    // Probabilists' Hermite He_k coefficients by He_{k+1} = u He_k - k He_{k-1}.
    std::vector<double> prev{1.0}, cur{1.0};
    if (k >= 1) cur = {0.0, 1.0};
    for (int r = 1; r < k; ++r) {
      std::vector<double> next(r + 2, 0.0);
      for (int p = 0; p <= r; ++p) next[p + 1] += cur[p];
      for (int p = 0; p < static_cast<int>(prev.size()); ++p) next[p] -= r * prev[p];
      prev = cur;
      cur = next;
    }
    const double scale = std::sqrt(rates(j) / rho);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const double norm = std::sqrt(MultiIndex({k}).factorial());
    Poly axis(d);
    double power = 1;
    for (int p = 0; p <= k; ++p) {
      std::vector<int> e(d, 0);
      e[j] = p;
      axis.add_term(MultiIndex(e), sign * cur[p] * power / norm);
      power *= scale;
    }
    out = out * axis;
  }
  return out;
}

double gaussian_expectation(const Poly& p, const Eigen::VectorXd& variances) {
  double s = 0;
  for (const auto& [m, c] : p.terms()) {
    double v = c;
    for (int j = 0; j < m.dim() && v != 0; ++j) {
      if (m[j] % 2) {
        v = 0;
        break;
      }
      for (int r = m[j] - 1; r > 0; r -= 2) v *= r;
      v *= std::pow(variances(j), m[j] / 2);
    }
    s += v;
  }
  return s;
}

double expectation(const MomentTable& moments, const Poly& p) {
  double s = 0;
  for (const auto& [m, c] : p.terms()) {
    auto it = moments.find(m);
    if (it == moments.end()) throw Error(ErrorKind::IncompleteTable, "moment " + m.str() + " not tabulated");
    s += c * it->second;
  }
  return s;
}

PolySemigroup::PolySemigroup(const OuModel& model, double t, int K)
    : flow_(model.flow(t)), moments_(moments_from_cumulants(cumulants_at(model, t, K))), K_(K) {}

Poly PolySemigroup::operator()(const Poly& p) const {
  if (p.degree() > K_) throw Error(ErrorKind::IncompleteTable, "polynomial degree exceeds semigroup table");
  return compose_linear(shift_convolve(moments_, p), flow_);
}

Poly poly_semigroup_apply(const OuModel& model, double t, const Poly& p) {
  return PolySemigroup(model, t, std::max(p.degree(), 0))(p);
}

Proportionality fit_proportional(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  Proportionality r;
  const double bb = b.squaredNorm();
  if (bb == 0) return r;
  r.constant = a.dot(b) / bb;
  const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
  r.residual = (a - r.constant * b).cwiseAbs().maxCoeff() / scale;
  return r;
}

}  // namespace levyou
