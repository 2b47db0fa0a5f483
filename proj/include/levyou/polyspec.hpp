#pragma once

#include <Eigen/Dense>

#include <map>
#include <optional>

#include "levyou/density.hpp"
#include "levyou/model.hpp"
#include "levyou/poly.hpp"

namespace levyou {

using MomentTable = std::map<MultiIndex, double>;

// Raw moments m_alpha from cumulants via
// m_{alpha+e_i} = sum_{beta<=alpha} C(alpha,beta) kappa_{beta+e_i} m_{alpha-beta}.
MomentTable moments_from_cumulants(const CumulantTable& kappa);

// Markov kernel f -> E f(A x + Y) with Y known through its cumulants and an
// optional linear pre-map A (identity when absent).
class MomentKernel {
 public:
  MomentKernel(CumulantTable cumulants, std::optional<Eigen::MatrixXd> pre_map = std::nullopt);

  int dim() const { return cumulants_.dim(); }
  int max_order() const { return cumulants_.max_order(); }
  const CumulantTable& cumulants() const { return cumulants_; }
  const MomentTable& moments() const { return moments_; }
  const std::optional<Eigen::MatrixXd>& pre_map() const { return pre_map_; }

 private:
  CumulantTable cumulants_;
  MomentTable moments_;
  std::optional<Eigen::MatrixXd> pre_map_;
};

// E p(z + Y) for a moment table of Y.
Poly shift_convolve(const MomentTable& moments, const Poly& p);
Poly convolve_markov(const MomentKernel& kernel, const Poly& p);
// Unique polynomial q with convolve_markov(kernel, q) = p, by block back-substitution
// from the top degree. Throws SingularPreMap.
Poly invert_on_polys(const MomentKernel& kernel, const Poly& p);

// Kernel Lambda with Gaussian part Q_inf - Qtilde_inf and the jump cumulants of mu.
// Qtilde = 0 gives Lambda_1. Throws OrderingViolated if Q_inf - Qtilde_inf is not PSD.
MomentKernel build_lambda(const OuModel& model, const Eigen::MatrixXd& Q_tilde, int K);
// Kernel V with pre-map M^{-1} and order-2 block Q_inf - M^{-1} diag(rho/lambda) M^{-T}.
MomentKernel build_V(const OuModel& model, int K);

// Target diffusion of V: generator rho Laplacian - sum lambda_i x_i d_i.
OuModel target_diffusion(const OuModel& model);

// prod_j phi_{n_j}(sqrt(lambda_j / rho) x_j), phi_k = (1/sqrt(k!)) e^{x^2/2} (d/dx)^k e^{-x^2/2}.
Poly hermite_orthonormal(const MultiIndex& n, const Eigen::VectorXd& rates, double rho);

// E p(X) for X ~ N(0, diag(variances)).
double gaussian_expectation(const Poly& p, const Eigen::VectorXd& variances);
// E p(X) from a raw moment table.
double expectation(const MomentTable& moments, const Poly& p);

// Exact P_t on polynomials: p -> E p(e^{tB} x + Z_t).
class PolySemigroup {
 public:
  PolySemigroup(const OuModel& model, double t, int K);
  Poly operator()(const Poly& p) const;

 private:
  Eigen::MatrixXd flow_;
  MomentTable moments_;
  int K_;
};

Poly poly_semigroup_apply(const OuModel& model, double t, const Poly& p);

// Eigenfunctions H_n = V^{-1} h_n and co-eigenfunction data for one model,
// with the V kernel and the moments of mu computed once up to degree K.
class EigenSystem {
 public:
  EigenSystem(const OuModel& model, int K);

  const OuModel& model() const { return *model_; }
  int max_degree() const { return K_; }
  double rho() const { return rho_; }
  const Eigen::VectorXd& rates() const { return rates_; }
  // D = diag(sqrt(lambda_j / rho))
  const Eigen::VectorXd& scaling() const { return scaling_; }
  const MomentKernel& V() const { return V_; }
  const MomentTable& mu_moments() const { return mu_moments_; }

  Poly hermite(const MultiIndex& n) const;
  Poly H(const MultiIndex& n) const;
  // Same eigenfunction from the generating function
  // sum_n H_n(x) z^n / sqrt(n!) = exp(-<Mx, Dz> - z^T z / 2) / F(iz), F(w) = F_{h_V}(M^T D w).
  Poly H_generating(const MultiIndex& n) const;
  double eigenvalue(const MultiIndex& n) const;  // <n, lambda>

  // <p, G_n>_mu = <V p, h_n>_{mu_rho} with G_n = V^* h_n.
  double pairing(const Poly& p, const MultiIndex& n) const;
  // Integration by parts pairing (1/sqrt(m!)) E_mu[(M^{-T} grad)^m H_n].
  double ibp_pairing(const MultiIndex& n, const MultiIndex& m) const;
  // Expected value of ibp_pairing(m, m): (-1)^{|m|} D^m.
  double coeigen_constant(const MultiIndex& m) const;

  // G_n mu = (1/sqrt(n!)) D^{-n} (M^{-T} grad)^n mu on a grid.
  DensityField coeigen_density(const MultiIndex& n, const GridSpec& grid) const;
  // V^*(h_n mu_rho) from the kernel h_V and the Gaussian transform of h_n mu_rho.
  DensityField coeigen_density_operator(const MultiIndex& n, const GridSpec& grid) const;
  // (-1)^{|n|} (M^{-T} grad)^n mu / sqrt(n!); equals (-1)^{|n|} d^n mu / sqrt(n!) for diagonal M.
  DensityField derivative_field(const MultiIndex& n, const GridSpec& grid) const;

  // Exact G_n for a Gaussian invariant law (Pi null), as a polynomial.
  Poly gaussian_G(const MultiIndex& n) const;

 private:
  const OuModel* model_;
  int K_;
  double rho_;
  Eigen::VectorXd rates_, scaling_;
  Eigen::MatrixXd M_, M_inv_;
  MomentKernel V_;
  MomentTable mu_moments_;
};

Poly eigenfunction_Hn(const OuModel& model, const MultiIndex& n);

// Least-squares constant c with a ~ c b over nodes where weight > threshold,
// together with the worst relative residual.
struct Proportionality {
  double constant = 0;
  double residual = 0;
};
Proportionality fit_proportional(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct BiorthogonalityResult {
  double exact = 0;  // <h_n, h_m>_{mu_rho}
  double ibp = 0;    // ibp_pairing(n, m) / coeigen_constant(m)
};
BiorthogonalityResult biorthogonality_inner(const EigenSystem& sys, const MultiIndex& n, const MultiIndex& m);
// h^d sum_k H_n(x_k) (G_m mu)(x_k)
double biorthogonality_grid(const EigenSystem& sys, const MultiIndex& n, const MultiIndex& m, const GridSpec& grid);

}  // namespace levyou
