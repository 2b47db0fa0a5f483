#pragma once

#include <Eigen/Dense>

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "levyou/levy.hpp"
#include "levyou/matops.hpp"
#include "levyou/poly.hpp"

namespace levyou {

// Generator triple (Q, B, Pi) of dX = B X dt + dL. Construction checks the
// Kalman rank condition and s(B) < 0; derived quantities are cached.
class OuModel {
 public:
  OuModel(Eigen::MatrixXd Q, Eigen::MatrixXd B, LevyMeasure pi);

  int dim() const { return static_cast<int>(B_.rows()); }
  const Eigen::MatrixXd& Q() const { return Q_; }
  const Eigen::MatrixXd& B() const { return B_; }
  const LevyMeasure& pi() const { return pi_; }
  const Eigen::MatrixXd& q_inf() const { return Qinf_; }
  const SpectralData& spectral() const { return spec_; }
  int kalman() const { return kalman_; }
  double abscissa() const { return spec_.abscissa; }
  // T* with e^{(s(B)+eps)T*} <= 1e-14.
  double horizon() const { return horizon_; }

  // e^{sB}, using the eigen decomposition when B is real-diagonalizable.
  Eigen::MatrixXd flow(double s) const;

 private:
  Eigen::MatrixXd Q_, B_;
  LevyMeasure pi_;
  Eigen::MatrixXd Qinf_;
  SpectralData spec_;
  int kalman_ = 0;
  double horizon_ = 0;
};

// Psi(xi) = -1/2 <Q xi, xi> + Phi(xi)
cplx psi(const OuModel& model, const Eigen::VectorXd& xi);

// Psi_t(xi) = -1/2 <Q_t xi, xi> + int_0^t Phi(e^{sB^T} xi) ds; t = +inf gives Psi_inf.
// Q_t and the flow matrices at quadrature nodes are cached, so one instance
// should be reused across many frequencies.
class TransitionExponent {
 public:
  TransitionExponent(const OuModel& model, double t);
  cplx operator()(const Eigen::VectorXd& xi) const;
  cplx jump_part(const Eigen::VectorXd& xi) const;
  const Eigen::MatrixXd& gram() const { return Qt_; }
  double time() const { return t_; }

 private:
  const Eigen::MatrixXd& node_flows(int level) const;

  const OuModel* model_;
  double t_;
  double upper_;  // integration horizon
  Eigen::MatrixXd Qt_;
  mutable std::mutex mutex_;
  mutable std::vector<std::unique_ptr<Eigen::MatrixXd>> levels_;  // stacked e^{sB^T} per level
};

cplx psi_t(const OuModel& model, double t, const Eigen::VectorXd& xi);
cplx psi_inf(const OuModel& model, const Eigen::VectorXd& xi);

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

// Cumulants kappa_m of a law, keyed by multi-index, complete up to max_order.
class CumulantTable {
 public:
  CumulantTable(int dim, int max_order) : dim_(dim), max_order_(max_order) {}
  int dim() const { return dim_; }
  int max_order() const { return max_order_; }
  double at(const MultiIndex& m) const;
  void set(const MultiIndex& m, double v) { entries_[m] = v; }
  void add(const MultiIndex& m, double v) { entries_[m] += v; }
  const std::map<MultiIndex, double>& entries() const { return entries_; }
  // Covariance block (order-2 cumulants) and mean (order-1).
  Eigen::MatrixXd covariance() const;
  Eigen::VectorXd mean() const;
  void add_covariance(const Eigen::MatrixXd& S);

 private:
  int dim_;
  int max_order_;
  std::map<MultiIndex, double> entries_;
};

// Cumulants of the law of X_t - e^{tB} x (t finite) or of mu (t = +inf),
// complete up to order K. Throws DivergentMoment if Pi lacks moments of order K.
CumulantTable cumulants_at(const OuModel& model, double t, int K);
CumulantTable cumulants_mu(const OuModel& model, int K);

// int y^m Pi_inf(dy) with Pi_inf = int_0^inf Pi o e^{-sB} ds.
double pi_inf_moment(const OuModel& model, const MultiIndex& m);

}  // namespace levyou
