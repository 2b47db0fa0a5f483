#pragma once

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "levyou/grid.hpp"
#include "levyou/poly.hpp"

namespace levyou {

using cplx = std::complex<double>;

struct Atom {
  Eigen::VectorXd location;
  double weight = 0;
};

struct NullMeasure {};

struct FiniteAtomic {
  std::vector<Atom> atoms;
};

// rate * (probability density on a grid); the grid's box bounds the support.
struct CompoundPoissonDensity {
  double rate = 0;
  DensityField jump_density;
};

struct SphericalAtom {
  Eigen::VectorXd direction;  // unit vector
  double weight = 0;
};

// Pi(dy) = sum_k weight_k * delta_{direction_k}(dtheta) r^{-1-alpha} dr
struct AlphaStable {
  double alpha = 1.5;
  std::vector<SphericalAtom> atoms;
};

class LevyMeasure {
 public:
  using Variant = std::variant<NullMeasure, FiniteAtomic, CompoundPoissonDensity, AlphaStable>;

  LevyMeasure(int dim, Variant v);
  static LevyMeasure null(int dim) { return LevyMeasure(dim, NullMeasure{}); }

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }
  bool is_null() const { return std::holds_alternative<NullMeasure>(v_); }
  bool is_stable() const { return std::holds_alternative<AlphaStable>(v_); }
  const AlphaStable& stable() const { return std::get<AlphaStable>(v_); }
  // Finite measures as weighted atoms (grid densities are discretised on their nodes).
  bool is_finite() const { return !is_stable(); }
  const std::vector<Atom>& atoms() const { return atoms_; }
  double total_mass() const;
  // int_{|y|<=1} y Pi(dy) for finite measures.
  Eigen::VectorXd small_jump_mean() const;

 private:
  int dim_;
  Variant v_;
  std::vector<Atom> atoms_;
};

// Phi(xi) = int (e^{i<xi,y>} - 1 - i<xi,y> 1_{|y|<=1}) Pi(dy)
cplx phi(const LevyMeasure& pi, const Eigen::VectorXd& xi);

// int_0^inf (e^{i r u} - 1 - i r u 1_{r<=1}) r^{-1-alpha} dr in closed form.
cplx stable_radial_exponent(double alpha, double u);

struct MeasureDiagnostics {
  bool log_moment = true;
  std::map<int, bool> poly_moment;   // order -> finite
  std::map<double, bool> exp_moment;  // kappa -> finite
};

MeasureDiagnostics measure_diagnostics(const LevyMeasure& pi, int n_max, const std::vector<double>& kappas);

// Largest n with polynomial moment of order n finite (capped at `cap`).
int polynomial_moment_order(const LevyMeasure& pi, int cap);

// Moments of the Levy measure used by the generator on polynomials:
// order 1 uses int_{|y|>1} y^m Pi(dy), higher orders int y^m Pi(dy).
std::map<MultiIndex, double> levy_generator_moments(const LevyMeasure& pi, int max_order);

}  // namespace levyou
