#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "levyou/density.hpp"
#include "levyou/model.hpp"
#include "levyou/poly.hpp"
#include "levyou/polyspec.hpp"

namespace levyou {

struct LatticePoint {
  double theta = 0;  // <n, lambda>; the eigenvalue is -theta
  int multiplicity = 0;
  std::vector<MultiIndex> reps;
};

// Distinct values <n, lambda> <= Theta, grouped within 1e-9 (1 + Theta).
// Throws CutoffTooLarge past 10^6 multi-indices.
std::vector<LatticePoint> lattice(const Eigen::VectorXd& rates, double Theta);

// L = <Bx, grad> on homogeneous polynomials of degree k (basis: multi_indices_of_order).
Eigen::MatrixXd drift_operator_matrix(const Eigen::MatrixXd& B, int k);

// A p = 1/2 tr(Q grad^2 p) + <Bx, grad p> + jump part, exact on polynomials.
Poly generator_apply(const OuModel& model, const Poly& p);

struct Multiplicity {
  int algebraic = 0;
  int geometric = 0;
  int index = 0;  // min r with ker (T - theta)^r = ker (T - theta)^{r+1}
  bool operator==(const Multiplicity&) const = default;
};

// Kernel dimensions of (T - theta)^r through nested orthonormal kernel bases.
Multiplicity matrix_multiplicity(const Eigen::MatrixXd& T, double theta);

// Multiplicities of theta (an eigenvalue of L, so theta <= 0) over polynomials of
// degree <= k_max. Throws CutoffTooSmall if k_max < ceil(|theta / s(B)|) + 1.
Multiplicity multiplicities(const Eigen::MatrixXd& B, double theta, int k_max);

struct MultiplicityRow {
  double theta = 0;  // eigenvalue (<= 0)
  Multiplicity drift;
  Multiplicity generator;
};

// Both tables restricted to polynomials of degree <= k_max (an invariant subspace
// for A and L), one row per lattice value reachable at that degree.
std::vector<MultiplicityRow> multiplicity_table(const OuModel& model, int k_max);
bool isospectrality_check(const OuModel& model, int k_max);

// sum_{|n| <= N} e^{-t <n,lambda>} <p, G_n> H_n
Poly spectral_apply(const OuModel& model, double t, const Poly& p, int N);

struct MehlerValue {
  double series = 0;
  double closed_form = 0;
};
// Truncated eigen-expansion of the transition kernel w.r.t. mu versus b_t / mu (Pi null).
MehlerValue mehler_kernel(const OuModel& model, double t, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int N);
// Logarithm of the closed form b_t(x, y) / mu(y) at every node y of the grid.
Eigen::VectorXd mehler_log_closed_form(const OuModel& model, double t, const Eigen::VectorXd& x, const GridSpec& grid);

enum class CompactnessVerdict { CompactSufficient, NonCompactNecessaryFail, Inconclusive };
const char* to_string(CompactnessVerdict v);

struct CompactnessReport {
  CompactnessVerdict verdict = CompactnessVerdict::Inconclusive;
  std::string detail;
};
CompactnessReport compactness_diagnostic(const OuModel& model, const GridSpec& grid);

// Smallest scanned t at which the N-truncated expansion of a Gaussian bump matches
// semigroup_apply_grid within 1e-4 on the central quarter of the grid (and keeps
// matching for larger scanned t). Returns +inf if no scanned t qualifies.
double estimate_t0(const OuModel& model, const GridSpec& grid, int N);

struct SpectralReport {
  std::vector<LatticePoint> lattice;
  std::vector<MultiplicityRow> eigenvalues;  // drift-side multiplicities per lattice value
  bool diagonalizable = false;
  bool all_semisimple = false;  // M_a == M_g for every listed eigenvalue
};
SpectralReport spectral_report(const OuModel& model, double Theta, int degree_cap);
std::string spectral_report_json(const SpectralReport& r);

}  // namespace levyou
