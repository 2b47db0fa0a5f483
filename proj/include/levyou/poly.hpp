#pragma once

#include <Eigen/Dense>

#include <compare>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace levyou {

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> components);
  MultiIndex(std::initializer_list<int> components) : MultiIndex(std::vector<int>(components)) {}
  static MultiIndex zero(int dim) { return MultiIndex(std::vector<int>(dim, 0)); }
  static MultiIndex unit(int dim, int axis);

  int dim() const { return static_cast<int>(c_.size()); }
  int order() const;
  int operator[](int i) const { return c_[i]; }
  const std::vector<int>& components() const { return c_; }
  double factorial() const;
  bool dominated_by(const MultiIndex& other) const;  // componentwise <=

  MultiIndex operator+(const MultiIndex& other) const;
  MultiIndex operator-(const MultiIndex& other) const;
  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

  std::string str() const;

 private:
  std::vector<int> c_;
};

// All multi-indices of the given order, in lexicographically descending order.
std::vector<MultiIndex> multi_indices_of_order(int dim, int order);
// All multi-indices of order <= max_order, graded.
std::vector<MultiIndex> multi_indices_up_to(int dim, int max_order);

// prod_j C(alpha_j, beta_j)
double binomial(const MultiIndex& alpha, const MultiIndex& beta);
// x^m
double monomial_value(const MultiIndex& m, const Eigen::VectorXd& x);

// Polynomial in d real variables stored as a sparse map of monomial coefficients.
class Poly {
 public:
  using Terms = std::map<MultiIndex, double>;

  explicit Poly(int dim = 1) : dim_(dim) {}
  static Poly constant(int dim, double c);
  static Poly variable(int dim, int axis);
  static Poly monomial(const MultiIndex& m, double c = 1.0);
  // Affine form <a, x> + c.
  static Poly linear(const Eigen::VectorXd& a, double c = 0.0);

  int dim() const { return dim_; }
  int degree() const;  // -1 for the zero polynomial
  bool is_zero() const { return terms_.empty(); }
  const Terms& terms() const { return terms_; }
  double coeff(const MultiIndex& m) const;
  void add_term(const MultiIndex& m, double c);

  double operator()(const Eigen::VectorXd& x) const;

  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  Poly& operator*=(double s);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(Poly a, double s) { return a *= s; }
  friend Poly operator*(double s, Poly a) { return a *= s; }
  friend Poly operator*(const Poly& a, const Poly& b);

  Poly derivative(int axis) const;
  Poly homogeneous_part(int order) const;
  // Drops coefficients with |c| <= tol.
  Poly pruned(double tol = 1e-14) const;
  double max_abs_coeff() const;

 private:
  int dim_;
  Terms terms_;
};

double max_coeff_diff(const Poly& a, const Poly& b);

// p(A x)
Poly compose_linear(const Poly& p, const Eigen::MatrixXd& A);

// Graded monomial basis of polynomials of degree <= max_degree.
class MonomialBasis {
 public:
  MonomialBasis(int dim, int max_degree);

  int dim() const { return dim_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& operator[](int i) const { return indices_[i]; }
  int index_of(const MultiIndex& m) const;
  // [begin, end) positions of the homogeneous monomials of the given degree.
  std::pair<int, int> degree_block(int degree) const;

  Eigen::VectorXd coefficients(const Poly& p) const;
  Poly to_poly(const Eigen::VectorXd& c, double prune_tol = 0.0) const;

  // Matrix of a linear map on polynomials of degree <= max_degree.
  Eigen::MatrixXd operator_matrix(const std::function<Poly(const Poly&)>& op) const;

 private:
  int dim_;
  int max_degree_;
  std::vector<MultiIndex> indices_;
  std::map<MultiIndex, int> lookup_;
  std::vector<int> block_start_;
};

}  // namespace levyou
