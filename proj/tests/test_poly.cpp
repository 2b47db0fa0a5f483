#include <gtest/gtest.h>

#include "levyou/poly.hpp"

using namespace levyou;

TEST(MultiIndex, Basics) {
  const MultiIndex a{2, 1};
  EXPECT_EQ(a.order(), 3);
  EXPECT_DOUBLE_EQ(a.factorial(), 2.0);
  EXPECT_TRUE(MultiIndex({1, 1}).dominated_by(a));
  EXPECT_FALSE(MultiIndex({0, 2}).dominated_by(a));
  EXPECT_EQ(a - MultiIndex({1, 0}), MultiIndex({1, 1}));
  EXPECT_DOUBLE_EQ(binomial(MultiIndex({4, 2}), MultiIndex({2, 1})), 12.0);
}

TEST(MultiIndex, Enumeration) {
  EXPECT_EQ(multi_indices_of_order(2, 3).size(), 4u);
  EXPECT_EQ(multi_indices_up_to(2, 6).size(), 28u);
  EXPECT_EQ(multi_indices_up_to(3, 2).size(), 10u);
  EXPECT_EQ(multi_indices_of_order(2, 2).front(), MultiIndex({2, 0}));
}

TEST(Poly, ArithmeticAndEvaluation) {
  const Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
  const Poly p = x * x + 3.0 * (x * y) - Poly::constant(2, 1);
  Eigen::Vector2d v(2, -1);
  EXPECT_DOUBLE_EQ(p(v), 4 - 6 - 1);
  EXPECT_EQ(p.degree(), 2);
  EXPECT_DOUBLE_EQ(p.coeff(MultiIndex({1, 1})), 3.0);
  EXPECT_TRUE((p - p).is_zero());
  EXPECT_EQ(Poly(2).degree(), -1);
  const Poly dx = p.derivative(0);
  EXPECT_DOUBLE_EQ(dx(v), 2 * 2 + 3 * -1);
  EXPECT_EQ(p.homogeneous_part(2).degree(), 2);
  EXPECT_DOUBLE_EQ(p.homogeneous_part(0).coeff(MultiIndex({0, 0})), -1.0);
}

TEST(Poly, ComposeLinear) {
  const Poly p = Poly::variable(2, 0) * Poly::variable(2, 1);
  Eigen::Matrix2d A;
  A << 1, 2, 3, 4;
  const Poly q = compose_linear(p, A);
  for (Eigen::Vector2d v : {Eigen::Vector2d(0.3, -1.2), Eigen::Vector2d(2, 5)})
    EXPECT_NEAR(q(v), p(A * v), 1e-12);
}

TEST(MonomialBasis, RoundTripAndOperators) {
  const MonomialBasis basis(2, 3);
  EXPECT_EQ(basis.size(), 10);
  const auto block = basis.degree_block(2);
  EXPECT_EQ(block.second - block.first, 3);
  Poly p(2);
  p.add_term(MultiIndex({1, 2}), 0.5);
  p.add_term(MultiIndex({0, 0}), -2);
  EXPECT_EQ(max_coeff_diff(basis.to_poly(basis.coefficients(p)), p), 0.0);
  const Eigen::MatrixXd D = basis.operator_matrix([](const Poly& q) { return q.derivative(1); });
  EXPECT_EQ(max_coeff_diff(basis.to_poly(D * basis.coefficients(p)), p.derivative(1)), 0.0);
}
