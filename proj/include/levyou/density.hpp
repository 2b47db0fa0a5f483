#pragma once

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>

#include "levyou/grid.hpp"
#include "levyou/model.hpp"
#include "levyou/poly.hpp"

namespace levyou {

// Fourier convention: F_f(xi) = int e^{+i<xi,x>} f(x) dx, inverse with (2 pi)^{-d} e^{-i<xi,x>}.
using SpectrumFn = std::function<cplx(const Eigen::VectorXd& xi)>;

// Samples F on all grid frequencies and inverts to nodes. Returns complex values.
Eigen::VectorXcd inverse_transform(const GridSpec& grid, const SpectrumFn& F);
// Inverse of sampled spectrum values (FFT slot order, row-major).
Eigen::VectorXcd inverse_transform(const GridSpec& grid, Eigen::VectorXcd spectrum);
// Grid approximation of F_f at all grid frequencies (FFT slot order).
Eigen::VectorXcd forward_transform(const GridSpec& grid, const Eigen::VectorXcd& values);

// Real density from a characteristic function. Throws GridTooCoarse when |F|
// on the outermost frequency shell exceeds 1e-8.
DensityField density_from_cf(const GridSpec& grid, const SpectrumFn& cf, const std::string& label = "density");

// L_j = 8 sqrt(var_j) + |mean_j| from the second cumulants of mu (Q_inf when
// those are unavailable), N_j = 256 in d <= 2 and 64 otherwise.
GridSpec default_grid(const OuModel& model);

DensityField invariant_density(const OuModel& model, const GridSpec& grid);
DensityField density_derivative(const OuModel& model, const GridSpec& grid, const MultiIndex& m);
// (R grad)^m mu with the rows of R giving the derivative directions.
DensityField directional_derivative(const OuModel& model, const GridSpec& grid, const Eigen::MatrixXd& R,
                                    const MultiIndex& m);

DensityField transition_density(const OuModel& model, double t, const Eigen::VectorXd& x, const GridSpec& grid);

// P_t f on the grid: spectral multiplier exp(Psi_t(-xi)) followed by cubic
// interpolation at e^{tB} x. Throws InterpolationOutOfRange if e^{tB} x leaves the grid.
DensityField semigroup_apply_grid(const OuModel& model, double t, const DensityField& f);

// Tensor cubic (4-point Lagrange) interpolation; throws InterpolationOutOfRange.
double interpolate(const DensityField& f, const Eigen::VectorXd& x);

// Marginal of a field on one axis (sum over the other axes times their spacing).
DensityField marginal(const DensityField& f, int axis);

void write_density_csv(std::ostream& os, const DensityField& f);
std::string density_json(const DensityField& f);

}  // namespace levyou
