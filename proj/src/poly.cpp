#include "levyou/poly.hpp"

#include <cmath>
#include <sstream>

#include "levyou/errors.hpp"

namespace levyou {

MultiIndex::MultiIndex(std::vector<int> components) : c_(std::move(components)) {
  for (int v : c_)
    if (v < 0) throw Error(ErrorKind::InvalidArgument, "multi-index entries must be non-negative");
}

MultiIndex MultiIndex::unit(int dim, int axis) {
  std::vector<int> c(dim, 0);
  c[axis] = 1;
  return MultiIndex(std::move(c));
}

int MultiIndex::order() const {
  int s = 0;
  for (int v : c_) s += v;
  return s;
}

double MultiIndex::factorial() const {
  double f = 1;
  for (int v : c_)
    for (int k = 2; k <= v; ++k) f *= k;
  return f;
}

bool MultiIndex::dominated_by(const MultiIndex& other) const {
  for (int i = 0; i < dim(); ++i)
    if (c_[i] > other.c_[i]) return false;
  return true;
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
  std::vector<int> c(c_);
  for (int i = 0; i < dim(); ++i) c[i] += other.c_[i];
  return MultiIndex(std::move(c));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
  std::vector<int> c(c_);
  for (int i = 0; i < dim(); ++i) c[i] -= other.c_[i];
  return MultiIndex(std::move(c));
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

namespace {

void enumerate(int dim, int axis, int remaining, std::vector<int>& cur, std::vector<MultiIndex>& out) {
  if (axis == dim - 1) {
    cur[axis] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[axis] = v;
    enumerate(dim, axis + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> multi_indices_of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(dim, 0);
  enumerate(dim, 0, order, cur, out);
  return out;
}

std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= max_order; ++k) {
    auto block = multi_indices_of_order(dim, k);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

double binomial(const MultiIndex& alpha, const MultiIndex& beta) {
  double c = 1;
  for (int i = 0; i < alpha.dim(); ++i) {
    const int n = alpha[i], k = beta[i];
    double b = 1;
    for (int j = 1; j <= k; ++j) b = b * (n - k + j) / j;
    c *= b;
  }
  return c;
}

double monomial_value(const MultiIndex& m, const Eigen::VectorXd& x) {
  double v = 1;
  for (int i = 0; i < m.dim(); ++i)
    for (int k = 0; k < m[i]; ++k) v *= x(i);
  return v;
}

Poly Poly::constant(int dim, double c) {
  Poly p(dim);
  p.add_term(MultiIndex::zero(dim), c);
  return p;
}

Poly Poly::variable(int dim, int axis) { return monomial(MultiIndex::unit(dim, axis)); }

Poly Poly::monomial(const MultiIndex& m, double c) {
  Poly p(m.dim());
  p.add_term(m, c);
  return p;
}

Poly Poly::linear(const Eigen::VectorXd& a, double c) {
  const int d = static_cast<int>(a.size());
  Poly p = Poly::constant(d, c);
  for (int i = 0; i < d; ++i) p.add_term(MultiIndex::unit(d, i), a(i));
  return p;
}

int Poly::degree() const {
  int deg = -1;
  for (const auto& [m, c] : terms_) deg = std::max(deg, m.order());
  return deg;
}

double Poly::coeff(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

void Poly::add_term(const MultiIndex& m, double c) {
  if (m.dim() != dim_) throw Error(ErrorKind::InvalidArgument, "multi-index dimension mismatch");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double Poly::operator()(const Eigen::VectorXd& x) const {
  double s = 0;
  for (const auto& [m, c] : terms_) s += c * monomial_value(m, x);
  return s;
}

Poly& Poly::operator+=(const Poly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

Poly& Poly::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out(a.dim());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) out.add_term(ma + mb, ca * cb);
  return out;
}

Poly Poly::derivative(int axis) const {
  Poly out(dim_);
  const MultiIndex e = MultiIndex::unit(dim_, axis);
  for (const auto& [m, c] : terms_)
    if (m[axis] > 0) out.add_term(m - e, c * m[axis]);
  return out;
}

Poly Poly::homogeneous_part(int order) const {
  Poly out(dim_);
  for (const auto& [m, c] : terms_)
    if (m.order() == order) out.add_term(m, c);
  return out;
}

Poly Poly::pruned(double tol) const {
  Poly out(dim_);
  for (const auto& [m, c] : terms_)
    if (std::abs(c) > tol) out.add_term(m, c);
  return out;
}

double Poly::max_abs_coeff() const {
  double v = 0;
  for (const auto& [m, c] : terms_) v = std::max(v, std::abs(c));
  return v;
}

double max_coeff_diff(const Poly& a, const Poly& b) { return (a - b).max_abs_coeff(); }

Poly compose_linear(const Poly& p, const Eigen::MatrixXd& A) {
  const int d = p.dim();
  if (A.rows() != d || A.cols() != d) throw Error(ErrorKind::InvalidArgument, "compose_linear: shape mismatch");
  const int deg = std::max(p.degree(), 0);
  // powers[i][k] = ((A x)_i)^k
  std::vector<std::vector<Poly>> powers(d);
  for (int i = 0; i < d; ++i) {
    const Poly row = Poly::linear(A.row(i).transpose());
    powers[i].push_back(Poly::constant(d, 1.0));
    for (int k = 1; k <= deg; ++k) powers[i].push_back(powers[i].back() * row);
  }
  Poly out(d);
  for (const auto& [m, c] : p.terms()) {
    Poly term = Poly::constant(d, c);
    for (int i = 0; i < d; ++i)
      if (m[i] > 0) term = term * powers[i][m[i]];
    out += term;
  }
  return out;
}

MonomialBasis::MonomialBasis(int dim, int max_degree) : dim_(dim), max_degree_(max_degree) {
  for (int k = 0; k <= max_degree; ++k) {
    block_start_.push_back(static_cast<int>(indices_.size()));
    for (auto& m : multi_indices_of_order(dim, k)) {
      lookup_.emplace(m, static_cast<int>(indices_.size()));
      indices_.push_back(std::move(m));
    }
  }
  block_start_.push_back(static_cast<int>(indices_.size()));
}

int MonomialBasis::index_of(const MultiIndex& m) const {
  auto it = lookup_.find(m);
  return it == lookup_.end() ? -1 : it->second;
}

std::pair<int, int> MonomialBasis::degree_block(int degree) const {
  return {block_start_[degree], block_start_[degree + 1]};
}

Eigen::VectorXd MonomialBasis::coefficients(const Poly& p) const {
  if (p.degree() > max_degree_) throw Error(ErrorKind::InvalidArgument, "polynomial degree exceeds basis");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(size());
  for (const auto& [m, v] : p.terms()) c(index_of(m)) = v;
  return c;
}

Poly MonomialBasis::to_poly(const Eigen::VectorXd& c, double prune_tol) const {
  Poly p(dim_);
  for (int i = 0; i < size(); ++i)
    if (std::abs(c(i)) > prune_tol) p.add_term(indices_[i], c(i));
  return p;
}

Eigen::MatrixXd MonomialBasis::operator_matrix(const std::function<Poly(const Poly&)>& op) const {
  Eigen::MatrixXd T(size(), size());
  for (int j = 0; j < size(); ++j) T.col(j) = coefficients(op(Poly::monomial(indices_[j])));
  return T;
}

}  // namespace levyou
