#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <type_traits>

#include "levyou/errors.hpp"

namespace levyou::quad {

inline constexpr int kRuleSize = 16;

struct Rule {
  std::array<double, kRuleSize> nodes{};    // on [-1, 1]
  std::array<double, kRuleSize> weights{};
};

// 16-point Gauss-Legendre rule, computed once by Newton iteration on P_16.
const Rule& gauss_legendre();

// Composite Gauss-Legendre with 2^level equal panels on [a, b].
template <class F>
auto composite(F&& f, double a, double b, int level) {
  const Rule& rule = gauss_legendre();
  const long panels = 1L << level;
  const double width = (b - a) / static_cast<double>(panels);
  using R = std::decay_t<decltype(f(a))>;
  R sum = R(f(a + 0.5 * width * (rule.nodes[0] + 1.0)) * (0.5 * width * rule.weights[0]));
  for (long p = 0; p < panels; ++p) {
    const double left = a + static_cast<double>(p) * width;
    for (int j = (p == 0 ? 1 : 0); j < kRuleSize; ++j) {
      sum += f(left + 0.5 * width * (rule.nodes[j] + 1.0)) * (0.5 * width * rule.weights[j]);
    }
  }
  return sum;
}

struct Options {
  double tol = 1e-12;
  int max_level = 14;
};

// Doubles the panel count until two successive estimates differ by less than
// tol * max(1, |estimate|). `norm` maps a result to a non-negative double.
template <class F, class Norm>
auto integrate(F&& f, double a, double b, Norm&& norm, Options opts = {}) {
  auto previous = composite(f, a, b, 0);
  for (int level = 1; level <= opts.max_level; ++level) {
    auto current = composite(f, a, b, level);
    const double diff = norm(current - previous);
    const double scale = std::max(1.0, norm(current));
    if (diff < opts.tol * scale) return current;
    previous = std::move(current);
  }
  throw Error(ErrorKind::NonConvergedQuadrature,
              "composite Gauss-Legendre did not reach tolerance on [" + std::to_string(a) + ", " +
                  std::to_string(b) + "]");
}

}  // namespace levyou::quad
