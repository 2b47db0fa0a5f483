#include "levyou/model.hpp"

#include <cmath>

#include "levyou/errors.hpp"
#include "levyou/quadrature.hpp"

namespace levyou {

OuModel::OuModel(Eigen::MatrixXd Q, Eigen::MatrixXd B, LevyMeasure pi)
    : Q_(std::move(Q)), B_(std::move(B)), pi_(std::move(pi)) {
  const auto d = B_.rows();
  if (d < 1 || B_.cols() != d || Q_.rows() != d || Q_.cols() != d)
    throw Error(ErrorKind::InvalidArgument, "Q and B must be square of equal size");
  if (d > 16) throw Error(ErrorKind::InvalidArgument, "dimension must not exceed 16");
  if (pi_.dim() != d) throw Error(ErrorKind::InvalidArgument, "Levy measure dimension mismatch");
  if ((Q_ - Q_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, Q_.cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::InvalidArgument, "Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qs(Q_);
  if (qs.eigenvalues()(0) < -1e-12 * std::max(1.0, qs.eigenvalues().cwiseAbs().maxCoeff()))
    throw Error(ErrorKind::InvalidArgument, "Q must be positive semidefinite");

  if (spectral_abscissa(B_) >= 0) throw Error(ErrorKind::UnstableDrift, "spectral abscissa s(B) >= 0");
  kalman_ = kalman_index(Q_, B_);
  Qinf_ = qinf(Q_, B_);
  spec_ = spectral_data(B_, Qinf_);
  horizon_ = decay_horizon(spec_.abscissa);
}

Eigen::MatrixXd OuModel::flow(double s) const {
  if (spec_.M) {
    const Eigen::VectorXd decay = (-s * spec_.rates).array().exp();
    return (*spec_.M_inv) * decay.asDiagonal() * (*spec_.M);
  }
  return expm(B_, s);
}

cplx psi(const OuModel& model, const Eigen::VectorXd& xi) {
  return -0.5 * xi.dot(model.Q() * xi) + phi(model.pi(), xi);
}

namespace {

constexpr int kMaxLevel = 12;
constexpr double kJumpTol = 1e-12;

double integration_upper(const OuModel& model, double t) {
  if (std::isfinite(t)) return t;
  double T = model.horizon();
  if (model.pi().is_stable()) T /= std::min(1.0, model.pi().stable().alpha);
  return T;
}

}  // namespace

TransitionExponent::TransitionExponent(const OuModel& model, double t)
    : model_(&model), t_(t), upper_(integration_upper(model, t)) {
  if (!(t >= 0)) throw Error(ErrorKind::InvalidArgument, "time must be non-negative");
  Qt_ = std::isfinite(t) ? gram_qt(model.Q(), model.B(), t) : model.q_inf();
  levels_.resize(kMaxLevel + 1);
}

const Eigen::MatrixXd& TransitionExponent::node_flows(int level) const {
  std::lock_guard<std::mutex> lock(mutex_);
  if (!levels_[level]) {
    const auto& rule = quad::gauss_legendre();
    const int d = model_->dim();
    const long panels = 1L << level;
    const double width = upper_ / static_cast<double>(panels);
    auto stacked = std::make_unique<Eigen::MatrixXd>(panels * quad::kRuleSize * d, d);
    for (long p = 0; p < panels; ++p)
      for (int j = 0; j < quad::kRuleSize; ++j) {
        const double s = p * width + 0.5 * width * (rule.nodes[j] + 1.0);
        stacked->block((p * quad::kRuleSize + j) * d, 0, d, d) = model_->flow(s).transpose();
      }
    levels_[level] = std::move(stacked);
  }
  return *levels_[level];
}

cplx TransitionExponent::jump_part(const Eigen::VectorXd& xi) const {
  if (model_->pi().is_null() || t_ == 0) return 0.0;
  const auto& rule = quad::gauss_legendre();
  const int d = model_->dim();
  auto level_sum = [&](int level) {
    const Eigen::VectorXd eta = node_flows(level) * xi;
    const long panels = 1L << level;
    const double half = 0.5 * upper_ / static_cast<double>(panels);
    cplx s = 0;
    for (long p = 0; p < panels; ++p)
      for (int j = 0; j < quad::kRuleSize; ++j)
        s += rule.weights[j] * half * phi(model_->pi(), eta.segment((p * quad::kRuleSize + j) * d, d));
    return s;
  };
  cplx prev = level_sum(0);
  for (int level = 1; level <= kMaxLevel; ++level) {
    const cplx cur = level_sum(level);
    if (std::abs(cur - prev) < kJumpTol * std::max(1.0, std::abs(cur))) return cur;
    prev = cur;
  }
  throw Error(ErrorKind::QuadratureFailure, "jump exponent integral did not converge");
}

cplx TransitionExponent::operator()(const Eigen::VectorXd& xi) const {
  return -0.5 * xi.dot(Qt_ * xi) + jump_part(xi);
}

cplx psi_t(const OuModel& model, double t, const Eigen::VectorXd& xi) {
  return TransitionExponent(model, t)(xi);
}

cplx psi_inf(const OuModel& model, const Eigen::VectorXd& xi) {
  return TransitionExponent(model, kInfiniteTime)(xi);
}

double CumulantTable::at(const MultiIndex& m) const {
  if (m.order() > max_order_)
    throw Error(ErrorKind::IncompleteTable, "cumulant of order " + std::to_string(m.order()) + " not tabulated");
  auto it = entries_.find(m);
  return it == entries_.end() ? 0.0 : it->second;
}

Eigen::MatrixXd CumulantTable::covariance() const {
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(dim_, dim_);
  if (max_order_ < 2) return S;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) S(i, j) = at(MultiIndex::unit(dim_, i) + MultiIndex::unit(dim_, j));
  return S;
}

Eigen::VectorXd CumulantTable::mean() const {
  Eigen::VectorXd m = Eigen::VectorXd::Zero(dim_);
  if (max_order_ < 1) return m;
  for (int i = 0; i < dim_; ++i) m(i) = at(MultiIndex::unit(dim_, i));
  return m;
}

void CumulantTable::add_covariance(const Eigen::MatrixXd& S) {
  for (int i = 0; i < dim_; ++i)
    for (int j = i; j < dim_; ++j) add(MultiIndex::unit(dim_, i) + MultiIndex::unit(dim_, j), S(i, j));
}

namespace {

// int_0^upper sum_atoms w (e^{sB} y)^m ds for 1 <= |m| <= K. At order 1 only
// atoms with |y| > 1 contribute when `truncate_first` is set.
std::map<MultiIndex, double> pushed_jump_moments(const OuModel& model, double upper, int K, bool truncate_first) {
  const int d = model.dim();
  std::vector<MultiIndex> idx;
  for (int k = 1; k <= K; ++k)
    for (auto& m : multi_indices_of_order(d, k)) idx.push_back(std::move(m));
  std::map<MultiIndex, double> out;
  if (idx.empty() || upper == 0 || model.pi().atoms().empty()) return out;
  const auto& atoms = model.pi().atoms();
  auto integrand = [&](double s) -> Eigen::VectorXd {
    const Eigen::MatrixXd E = model.flow(s);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(idx.size()));
    for (const auto& a : atoms) {
      const Eigen::VectorXd z = E * a.location;
      const bool small = a.location.norm() <= 1.0;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        if (truncate_first && small && idx[i].order() == 1) continue;
        v(static_cast<Eigen::Index>(i)) += a.weight * monomial_value(idx[i], z);
      }
    }
    return v;
  };
  auto norm = [](const auto& v) { return v.cwiseAbs().maxCoeff(); };
  Eigen::VectorXd r;
  try {
    r = quad::integrate(integrand, 0.0, upper, norm, {1e-13, 14});
  } catch (const Error& e) {
    throw Error(ErrorKind::QuadratureFailure, e.what());
  }
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx[i]] = r(static_cast<Eigen::Index>(i));
  return out;
}

}  // namespace

CumulantTable cumulants_at(const OuModel& model, double t, int K) {
  const int d = model.dim();
  if (K < 0) throw Error(ErrorKind::InvalidArgument, "cumulant order must be non-negative");
  CumulantTable table(d, K);
  const bool infinite = !std::isfinite(t);
  const auto& pi = model.pi();
  if (pi.is_stable()) {
    if (K > polynomial_moment_order(pi, K))
      throw Error(ErrorKind::DivergentMoment, "stable jumps have no moment of order " + std::to_string(K));
    if (K >= 1) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
      for (const auto& a : pi.stable().atoms) c += a.weight * a.direction / (pi.stable().alpha - 1.0);
      const Eigen::MatrixXd Binv = model.B().inverse();
      const Eigen::VectorXd k1 = infinite ? Eigen::VectorXd(-Binv * c)
                                          : Eigen::VectorXd(Binv * (model.flow(t) - Eigen::MatrixXd::Identity(d, d)) * c);
      for (int i = 0; i < d; ++i) table.set(MultiIndex::unit(d, i), k1(i));
    }
  } else {
    const double upper = infinite ? model.horizon() : t;
    for (const auto& [m, v] : pushed_jump_moments(model, upper, K, true)) table.set(m, v);
  }
  if (K >= 2) table.add_covariance(infinite ? model.q_inf() : gram_qt(model.Q(), model.B(), t));
  return table;
}

CumulantTable cumulants_mu(const OuModel& model, int K) { return cumulants_at(model, kInfiniteTime, K); }

double pi_inf_moment(const OuModel& model, const MultiIndex& m) {
  const auto& pi = model.pi();
  if (m.order() == 0) throw Error(ErrorKind::InvalidArgument, "moment order must be positive");
  if (pi.is_stable()) {
    const auto& st = pi.stable();
    if (m.order() >= st.alpha) throw Error(ErrorKind::DivergentMoment, "stable Pi_inf moment diverges");
    Eigen::VectorXd c = Eigen::VectorXd::Zero(model.dim());
    for (const auto& a : st.atoms) c += a.weight * a.direction;
    if (c.norm() > 1e-12)
      throw Error(ErrorKind::DivergentMoment, "unbalanced stable measure: first moment diverges at the origin");
    return 0.0;
  }
  auto table = pushed_jump_moments(model, model.horizon(), m.order(), false);
  return table.at(m);
}

}  // namespace levyou
