#include "levyou/density.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "levyou/errors.hpp"
#include "levyou/io.hpp"

namespace levyou {

namespace {

constexpr double kTailTol = 1e-8;

// Applies `line_op` to every 1-D line of `data` along `axis`.
template <class Op>
void for_each_line(const GridSpec& grid, int axis, Eigen::VectorXcd& data, Op&& line_op) {
  const int n = grid.points()[axis];
  long stride = 1;
  for (int j = axis + 1; j < grid.dim(); ++j) stride *= grid.points()[j];
  const long outer = grid.size() / (stride * n);
  std::vector<cplx> line(n), out(n);
  for (long o = 0; o < outer; ++o)
    for (long i = 0; i < stride; ++i) {
      const long base = o * n * stride + i;
      for (int k = 0; k < n; ++k) line[k] = data(base + k * stride);
      line_op(line, out);
      for (int k = 0; k < n; ++k) data(base + k * stride) = out[k];
    }
}

double alternating(int m) { return (std::abs(m) % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

Eigen::VectorXcd inverse_transform(const GridSpec& grid, Eigen::VectorXcd spectrum) {
  if (spectrum.size() != grid.size()) throw Error(ErrorKind::InvalidArgument, "spectrum size mismatch");
  Eigen::FFT<double> fft;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double scale = 1.0 / (2.0 * grid.halfwidth()[axis]);  // dxi / (2 pi)
    for_each_line(grid, axis, spectrum, [&](std::vector<cplx>& line, std::vector<cplx>& out) {
      for (int k = 0; k < static_cast<int>(line.size()); ++k)
        line[k] *= alternating(grid.frequency_index(axis, k)) * scale;
      fft.fwd(out, line);
    });
  }
  return spectrum;
}

Eigen::VectorXcd inverse_transform(const GridSpec& grid, const SpectrumFn& F) {
  Eigen::VectorXcd spec(grid.size());
  for (long k = 0; k < grid.size(); ++k) spec(k) = F(grid.frequency_at(k));
  return inverse_transform(grid, std::move(spec));
}

Eigen::VectorXcd forward_transform(const GridSpec& grid, const Eigen::VectorXcd& values) {
  if (values.size() != grid.size()) throw Error(ErrorKind::InvalidArgument, "field size mismatch");
  Eigen::VectorXcd data = values;
  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::Unscaled);
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double h = grid.spacing(axis);
    for_each_line(grid, axis, data, [&](std::vector<cplx>& line, std::vector<cplx>& out) {
      fft.inv(out, line);
      for (int k = 0; k < static_cast<int>(out.size()); ++k) out[k] *= alternating(grid.frequency_index(axis, k)) * h;
    });
  }
  return data;
}

namespace {

bool on_outer_shell(const GridSpec& grid, long flat) {
  const auto idx = grid.unflatten(flat);
  for (int j = 0; j < grid.dim(); ++j)
    if (grid.frequency_index(j, idx[j]) == -grid.points()[j] / 2) return true;
  return false;
}

}  // namespace

DensityField density_from_cf(const GridSpec& grid, const SpectrumFn& cf, const std::string& label) {
  Eigen::VectorXcd spec(grid.size());
  double tail = 0;
  for (long k = 0; k < grid.size(); ++k) {
    spec(k) = cf(grid.frequency_at(k));
    if (on_outer_shell(grid, k)) tail = std::max(tail, std::abs(spec(k)));
  }
  if (tail > kTailTol)
    throw Error(ErrorKind::GridTooCoarse, "characteristic function is " + std::to_string(tail) +
                                              " on the edge of the frequency box; refine the grid");
  DensityField out{grid, inverse_transform(grid, std::move(spec)).real(), label};
  return out;
}

GridSpec default_grid(const OuModel& model) {
  const int d = model.dim();
  Eigen::MatrixXd S = model.q_inf();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  double floor = 0;
  if (model.pi().is_stable()) {
    floor = 32.0;
  } else {
    const CumulantTable c = cumulants_mu(model, 2);
    S = c.covariance();
    mean = c.mean();
  }
  std::vector<double> L(d);
  for (int j = 0; j < d; ++j) L[j] = std::max(8.0 * std::sqrt(std::max(S(j, j), 0.0)) + std::abs(mean(j)), floor);
  return GridSpec(L, std::vector<int>(d, d <= 2 ? 256 : 64));
}

DensityField invariant_density(const OuModel& model, const GridSpec& grid) {
  if (grid.dim() != model.dim()) throw Error(ErrorKind::InvalidArgument, "grid dimension mismatch");
  TransitionExponent psi(model, kInfiniteTime);
  return density_from_cf(grid, [&](const Eigen::VectorXd& xi) { return std::exp(psi(xi)); }, "mu");
}

DensityField directional_derivative(const OuModel& model, const GridSpec& grid, const Eigen::MatrixXd& R,
                                    const MultiIndex& m) {
  if (grid.dim() != model.dim() || m.dim() != model.dim())
    throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  TransitionExponent psi(model, kInfiniteTime);
  auto cf = [&](const Eigen::VectorXd& xi) {
    const Eigen::VectorXd eta = R * xi;
    cplx mult = 1.0;
    for (int j = 0; j < m.dim(); ++j)
      for (int k = 0; k < m[j]; ++k) mult *= cplx(0.0, -eta(j));
    return mult * std::exp(psi(xi));
  };
  return density_from_cf(grid, cf, "derivative" + m.str());
}

DensityField density_derivative(const OuModel& model, const GridSpec& grid, const MultiIndex& m) {
  return directional_derivative(model, grid, Eigen::MatrixXd::Identity(model.dim(), model.dim()), m);
}

DensityField transition_density(const OuModel& model, double t, const Eigen::VectorXd& x, const GridSpec& grid) {
  if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "transition density needs t > 0");
  if (x.size() != model.dim() || grid.dim() != model.dim())
    throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
  TransitionExponent psi(model, t);
  const Eigen::VectorXd shift = model.flow(t) * x;
  auto cf = [&](const Eigen::VectorXd& xi) { return std::exp(psi(xi) + cplx(0.0, xi.dot(shift))); };
  return density_from_cf(grid, cf, "p_t");
}

double interpolate(const DensityField& f, const Eigen::VectorXd& x) {
  const GridSpec& g = f.grid;
  const int d = g.dim();
  std::vector<int> base(d);
  std::vector<std::array<double, 4>> w(d);
  for (int j = 0; j < d; ++j) {
    const int n = g.points()[j];
    const double u = (x(j) + g.halfwidth()[j]) / g.spacing(j);
    if (!(u >= -1e-12 && u <= n - 1 + 1e-12))
      throw Error(ErrorKind::InterpolationOutOfRange, "point outside the grid on axis " + std::to_string(j));
    int i0 = static_cast<int>(std::floor(u)) - 1;
    i0 = std::clamp(i0, 0, n - 4);
    for (int a = 0; a < 4; ++a) {
      double l = 1;
      for (int b = 0; b < 4; ++b)
        if (b != a) l *= (u - (i0 + b)) / static_cast<double>(a - b);
      w[j][a] = l;
    }
    base[j] = i0;
  }
  double s = 0;
  std::vector<int> offs(d, 0), idx(d);
  const int total = 1 << (2 * d);
  for (int c = 0; c < total; ++c) {
    double wt = 1;
    int rem = c;
    for (int j = 0; j < d; ++j) {
      const int a = rem % 4;
      rem /= 4;
      idx[j] = base[j] + a;
      wt *= w[j][a];
    }
    s += wt * f.values(g.flatten(idx));
  }
  return s;
}

DensityField semigroup_apply_grid(const OuModel& model, double t, const DensityField& f) {
  if (f.grid.dim() != model.dim()) throw Error(ErrorKind::InvalidArgument, "grid dimension mismatch");
  if (t == 0) return f;
  const GridSpec& g = f.grid;
  TransitionExponent psi(model, t);
  Eigen::VectorXcd spec = forward_transform(g, f.values.cast<cplx>());
  for (long k = 0; k < g.size(); ++k) spec(k) *= std::exp(psi(-g.frequency_at(k)));
  DensityField smoothed{g, inverse_transform(g, std::move(spec)).real(), f.label};
  const Eigen::MatrixXd E = model.flow(t);
  DensityField out{g, Eigen::VectorXd(g.size()), "P_t " + f.label};
  for (long k = 0; k < g.size(); ++k) out.values(k) = interpolate(smoothed, E * g.node_at(k));
  return out;
}

DensityField marginal(const DensityField& f, int axis) {
  const GridSpec& g = f.grid;
  GridSpec m({g.halfwidth()[axis]}, {g.points()[axis]});
  double cell = 1;
  for (int j = 0; j < g.dim(); ++j)
    if (j != axis) cell *= g.spacing(j);
  Eigen::VectorXd v = Eigen::VectorXd::Zero(g.points()[axis]);
  for (long k = 0; k < g.size(); ++k) v(g.unflatten(k)[axis]) += f.values(k) * cell;
  return DensityField{m, v, f.label + " marginal"};
}

void write_density_csv(std::ostream& os, const DensityField& f) {
  const int d = f.grid.dim();
  for (int j = 0; j < d; ++j) os << "axis" << j << ',';
  os << "value\n";
  char buf[64];
  for (long k = 0; k < f.grid.size(); ++k) {
    const Eigen::VectorXd x = f.grid.node_at(k);
    for (int j = 0; j < d; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g,", x(j));
      os << buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", f.values(k));
    os << buf;
  }
}

std::string density_json(const DensityField& f) {
  nlohmann::json j;
  j["label"] = f.label;
  j["L"] = f.grid.halfwidth();
  j["N"] = f.grid.points();
  j["values"] = std::vector<double>(f.values.data(), f.values.data() + f.values.size());
  return dump_json(j);
}

}  // namespace levyou
