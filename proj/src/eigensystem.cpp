#include <cmath>

#include "levyou/errors.hpp"
#include "levyou/polyspec.hpp"

namespace levyou {

namespace {

double inverse_scaling_power(const Eigen::VectorXd& D, const MultiIndex& n) {
  double s = 1;
  for (int j = 0; j < n.dim(); ++j) s /= std::pow(D(j), n[j]);
  return s;
}

// (R grad)_j p = sum_k R(j, k) d_k p
Poly directional(const Poly& p, const Eigen::MatrixXd& R, int j) {
  Poly out(p.dim());
  for (int k = 0; k < p.dim(); ++k)
    if (R(j, k) != 0) out += R(j, k) * p.derivative(k);
  return out;
}

using Series = std::map<MultiIndex, Poly>;

}  // namespace

EigenSystem::EigenSystem(const OuModel& model, int K)
    : model_(&model), K_(K), V_(build_V(model, K)),
      mu_moments_(moments_from_cumulants(cumulants_mu(model, K))) {
  const auto& s = model.spectral();
  rho_ = *s.varrho;
  rates_ = s.rates;
  scaling_ = (rates_ / rho_).cwiseSqrt();
  M_ = *s.M;
  M_inv_ = *s.M_inv;
}

Poly EigenSystem::hermite(const MultiIndex& n) const { return hermite_orthonormal(n, rates_, rho_); }

Poly EigenSystem::H(const MultiIndex& n) const {
  if (n.order() > K_) throw Error(ErrorKind::IncompleteTable, "eigenfunction degree exceeds table");
  return invert_on_polys(V_, hermite(n));
}

double EigenSystem::eigenvalue(const MultiIndex& n) const {
  double s = 0;
  for (int j = 0; j < n.dim(); ++j) s += n[j] * rates_(j);
  return s;
}

Poly EigenSystem::H_generating(const MultiIndex& n) const {
  const int d = n.dim();
  const int N = n.order();
  if (N > K_) throw Error(ErrorKind::IncompleteTable, "eigenfunction degree exceeds table");
  const Eigen::VectorXd variances = rho_ * rates_.cwiseInverse();

  // ln F(iz) = Psi_inf(i M^T D z) + 1/2 sum_j v_j (i D_j z_j)^2, with
  // Psi_inf(i w) = sum_m kappa_m (-w)^m / m!.
  const CumulantTable kappa = cumulants_mu(*model_, N);
  Poly cgf(d);
  for (const auto& [m, k] : kappa.entries()) cgf.add_term(m, k / m.factorial());
  const Eigen::MatrixXd subst = -(M_.transpose() * scaling_.asDiagonal());
  Poly logF = compose_linear(cgf, subst);
  for (int j = 0; j < d; ++j)
    logF.add_term(MultiIndex::unit(d, j) + MultiIndex::unit(d, j), -0.5 * variances(j) * scaling_(j) * scaling_(j));

  // Exponent S(z) = -<Mx, Dz> - z^T z / 2 - ln F(iz); coefficients are polynomials in x.
  Series S;
  auto slot = [&](const MultiIndex& m) -> Poly& { return S.try_emplace(m, d).first->second; };
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd row = -scaling_(j) * M_.row(j).transpose();
    slot(MultiIndex::unit(d, j)) += Poly::linear(row);
    slot(MultiIndex::unit(d, j) + MultiIndex::unit(d, j)) += Poly::constant(d, -0.5);
  }
  for (const auto& [m, c] : logF.terms())
    if (m.order() >= 1 && m.order() <= N) slot(m) += Poly::constant(d, -c);

  // exp of the series: |g| f_g = sum_{0 < m <= g} |m| S_m f_{g-m}.
  Series f;
  f[MultiIndex::zero(d)] = Poly::constant(d, 1.0);
  for (int k = 1; k <= N; ++k) {
    for (const auto& g : multi_indices_of_order(d, k)) {
      if (!g.dominated_by(n)) continue;
      Poly acc(d);
      for (const auto& [m, Sm] : S) {
        if (!m.dominated_by(g)) continue;
        auto it = f.find(g - m);
        if (it == f.end()) continue;
        acc += static_cast<double>(m.order()) * (Sm * it->second);
      }
      f[g] = (1.0 / k) * acc;
    }
  }
  return std::sqrt(n.factorial()) * f[n];
}

double EigenSystem::pairing(const Poly& p, const MultiIndex& n) const {
  const Eigen::VectorXd variances = rho_ * rates_.cwiseInverse();
  return gaussian_expectation(convolve_markov(V_, p) * hermite(n), variances);
}

double EigenSystem::ibp_pairing(const MultiIndex& n, const MultiIndex& m) const {
  const Eigen::MatrixXd R = M_inv_.transpose();
  Poly q = H(n);
  for (int j = 0; j < m.dim(); ++j)
    for (int r = 0; r < m[j]; ++r) q = directional(q, R, j);
  return expectation(mu_moments_, q) / std::sqrt(m.factorial());
}

double EigenSystem::coeigen_constant(const MultiIndex& m) const {
  const double sign = (m.order() % 2 == 0) ? 1.0 : -1.0;
  return sign / inverse_scaling_power(scaling_, m);
}

DensityField EigenSystem::coeigen_density(const MultiIndex& n, const GridSpec& grid) const {
  DensityField f = directional_derivative(*model_, grid, M_inv_.transpose(), n);
  f.values *= inverse_scaling_power(scaling_, n) / std::sqrt(n.factorial());
  f.label = "G" + n.str() + " mu";
  return f;
}

DensityField EigenSystem::coeigen_density_operator(const MultiIndex& n, const GridSpec& grid) const {
  const int d = model_->dim();
  const Eigen::VectorXd v = rho_ * rates_.cwiseInverse();
  const Poly h = hermite(n);
  std::vector<std::pair<MultiIndex, double>> terms(h.terms().begin(), h.terms().end());
  TransitionExponent psi(*model_, kInfiniteTime);
  const Eigen::MatrixXd R = M_inv_.transpose();
  auto cf = [&](const Eigen::VectorXd& xi) {
    const Eigen::VectorXd eta = R * xi;
    // F[h mu_rho](eta) = e^{-1/2 sum v eta^2} E h(U + i v eta)
    Eigen::VectorXcd shift(d);
    for (int j = 0; j < d; ++j) shift(j) = cplx(0.0, v(j) * eta(j));
    cplx eh = 0;
    for (const auto& [alpha, c] : terms) {
      cplx term = 0;
      std::vector<int> beta(d, 0);
      while (true) {
        cplx w = binomial(alpha, MultiIndex(beta));
        for (int j = 0; j < d && w != 0.0; ++j) {
          if (beta[j] % 2) {
            w = 0;
            break;
          }
          for (int r = beta[j] - 1; r > 0; r -= 2) w *= r;
          w *= std::pow(v(j), beta[j] / 2);
          for (int r = 0; r < alpha[j] - beta[j]; ++r) w *= shift(j);
        }
        term += w;
        int j = d - 1;
        while (j >= 0 && beta[j] == alpha[j]) beta[j--] = 0;
        if (j < 0) break;
        ++beta[j];
      }
      eh += c * term;
    }
    double quad = 0;
    for (int j = 0; j < d; ++j) quad += v(j) * eta(j) * eta(j);
    const cplx gauss_part = std::exp(-0.5 * quad) * eh;
    const cplx h_V = std::exp(psi(xi) + 0.5 * quad);
    return gauss_part * h_V;
  };
  DensityField f = density_from_cf(grid, cf, "V*(h mu_rho)");
  return f;
}

DensityField EigenSystem::derivative_field(const MultiIndex& n, const GridSpec& grid) const {
  DensityField f = directional_derivative(*model_, grid, M_inv_.transpose(), n);
  const double sign = (n.order() % 2 == 0) ? 1.0 : -1.0;
  f.values *= sign / std::sqrt(n.factorial());
  f.label = "(-1)^|n| d^n mu / sqrt(n!)";
  return f;
}

Poly EigenSystem::gaussian_G(const MultiIndex& n) const {
  if (!model_->pi().is_null()) throw Error(ErrorKind::InvalidArgument, "closed-form G_n needs a Gaussian model");
  const int d = model_->dim();
  const Eigen::MatrixXd R = M_inv_.transpose();
  const Eigen::MatrixXd score = -R * model_->q_inf().inverse();  // (R grad log mu)(x) = score x
  Poly p = Poly::constant(d, 1.0);
  for (int j = 0; j < d; ++j)
    for (int r = 0; r < n[j]; ++r) p = directional(p, R, j) + Poly::linear(score.row(j).transpose()) * p;
  return (inverse_scaling_power(scaling_, n) / std::sqrt(n.factorial())) * p;
}

Poly eigenfunction_Hn(const OuModel& model, const MultiIndex& n) { return EigenSystem(model, n.order()).H(n); }

BiorthogonalityResult biorthogonality_inner(const EigenSystem& sys, const MultiIndex& n, const MultiIndex& m) {
  BiorthogonalityResult r;
  const Eigen::VectorXd v = sys.rho() * sys.rates().cwiseInverse();
  r.exact = gaussian_expectation(sys.hermite(n) * sys.hermite(m), v);
  r.ibp = sys.ibp_pairing(n, m) / sys.coeigen_constant(m);
  return r;
}

double biorthogonality_grid(const EigenSystem& sys, const MultiIndex& n, const MultiIndex& m, const GridSpec& grid) {
  const Poly Hn = sys.H(n);
  const DensityField Gm = sys.coeigen_density(m, grid);
  double s = 0;
  for (long k = 0; k < grid.size(); ++k) s += Hn(grid.node_at(k)) * Gm.values(k);
  return s * grid.cell_volume();
}

}  // namespace levyou
