#pragma once

// Independent reference values used by the tests. Nothing here calls into the
// library, so agreement is a genuine cross-check.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

inline std::string fixture(const std::string& name) { return std::string(LEVYOU_FIXTURES) + "/" + name + ".json"; }

inline double normal_pdf(double x, double var = 1.0) {
  return std::exp(-0.5 * x * x / var) / std::sqrt(2 * std::numbers::pi * var);
}

// Probabilists' Hermite polynomial He_n by the three-term recurrence.
inline double hermite_he(int n, double x) {
  double a = 1, b = x;
  if (n == 0) return a;
  for (int k = 1; k < n; ++k) {
    const double c = x * b - k * a;
    a = b;
    b = c;
  }
  return b;
}

inline double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Classical Mehler kernel for the standard Gaussian: sum_n rho^n He_n(x) He_n(y) / n!.
inline double mehler_classical(double rho, double x, double y) {
  const double s = 1 - rho * rho;
  return std::exp((2 * rho * x * y - rho * rho * (x * x + y * y)) / (2 * s)) / std::sqrt(s);
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4 : 2) * f(a + k * h);
  return s * h / 3;
}

// int_0^inf (e^{iru} - 1 - iru 1_{r<=1}) r^{-1-alpha} dr. On (0, 1] the substitution
// r = v^p makes the integrand smooth; [1, R] uses a fine Simpson rule and the
// tail beyond R two terms of integration by parts plus the exact -1 part.
inline cplx stable_radial_numeric(double alpha, double u) {
  const double p = 4.0 / (2.0 - alpha);
  auto inner = [&](double v, bool imag) {
    if (v == 0) return 0.0;
    const double r = std::pow(v, p);
    const double jac = p * std::pow(v, p - 1);
    const double x = r * u;
    // Cancellation-free forms: cos x - 1 = -2 sin^2(x/2), and a Taylor series for sin x - x.
    double val;
    if (!imag) {
      const double s = std::sin(0.5 * x);
      val = -2 * s * s;
    } else if (std::abs(x) < 0.1) {
      const double x2 = x * x;
      val = -x * x2 / 6 * (1 - x2 / 20 * (1 - x2 / 42 * (1 - x2 / 72)));
    } else {
      val = std::sin(x) - x;
    }
    return val * std::pow(r, -1 - alpha) * jac;
  };
  double re = simpson([&](double v) { return inner(v, false); }, 0, 1, 20000);
  double im = simpson([&](double v) { return inner(v, true); }, 0, 1, 20000);
  const double R = 2000;
  re += simpson([&](double r) { return (std::cos(r * u) - 1) * std::pow(r, -1 - alpha); }, 1, R, 4000000);
  im += simpson([&](double r) { return std::sin(r * u) * std::pow(r, -1 - alpha); }, 1, R, 4000000);
  const double beta = 1 + alpha;
  const cplx iu(0, u);
  const cplx e = std::exp(iu * R);
  const cplx tail = -e * std::pow(R, -beta) / iu - e * beta * std::pow(R, -beta - 1) / (iu * iu);
  return cplx(re, im) + tail - std::pow(R, -alpha) / alpha;
}

// (lambda / b) int_0^xi (e^{iu} - 1) / u du by its power series, minus the
// compensator i xi lambda / b: the invariant exponent of the single-atom model
// without its Gaussian part.
inline cplx cp_single_atom_psi_inf(double lambda, double b, double xi) {
  cplx sum = 0;
  cplx term = 1;  // (i xi)^k / k!
  for (int k = 1; k < 200; ++k) {
    term *= cplx(0, xi) / static_cast<double>(k);
    sum += term / static_cast<double>(k);
    if (std::abs(term) < 1e-30) break;
  }
  return (lambda / b) * sum - cplx(0, xi * lambda / b);
}

}  // namespace oracle
