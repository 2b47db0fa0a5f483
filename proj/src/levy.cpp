#include "levyou/levy.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "levyou/errors.hpp"

namespace levyou {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

}  // namespace

LevyMeasure::LevyMeasure(int dim, Variant v) : dim_(dim), v_(std::move(v)) {
  require(dim >= 1, "Levy measure dimension must be positive");
  if (auto* fa = std::get_if<FiniteAtomic>(&v_)) {
    for (const auto& a : fa->atoms) {
      require(a.location.size() == dim, "atom dimension mismatch");
      require(a.location.norm() > 0, "atoms must avoid the origin");
      require(a.weight > 0 && std::isfinite(a.weight), "atom weights must be positive and finite");
    }
    atoms_ = fa->atoms;
  } else if (auto* cp = std::get_if<CompoundPoissonDensity>(&v_)) {
    require(cp->rate > 0 && std::isfinite(cp->rate), "compound Poisson rate must be positive");
    const auto& f = cp->jump_density;
    require(f.grid.dim() == dim, "jump density dimension mismatch");
    require(f.values.size() == f.grid.size(), "jump density size mismatch");
    require((f.values.array() >= 0).all(), "jump density must be non-negative");
    require(std::abs(f.integral() - 1.0) <= 1e-8, "jump density must integrate to 1 within 1e-8");
    const double cell = f.grid.cell_volume();
    for (long k = 0; k < f.grid.size(); ++k) {
      if (f.values(k) <= 0) continue;
      Eigen::VectorXd y = f.grid.node_at(k);
      if (y.norm() == 0) continue;  // a single node carries no mass in the limit
      atoms_.push_back({y, cp->rate * f.values(k) * cell});
    }
  } else if (auto* st = std::get_if<AlphaStable>(&v_)) {
    require(st->alpha > 0 && st->alpha < 2, "stability index must lie in (0, 2)");
    require(!st->atoms.empty(), "stable measure needs at least one spherical atom");
    for (const auto& a : st->atoms) {
      require(a.direction.size() == dim, "direction dimension mismatch");
      require(std::abs(a.direction.norm() - 1.0) <= 1e-12, "directions must be unit vectors");
      require(a.weight > 0 && std::isfinite(a.weight), "spherical weights must be positive");
    }
  }
}

double LevyMeasure::total_mass() const {
  if (is_stable()) return std::numeric_limits<double>::infinity();
  double m = 0;
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

Eigen::VectorXd LevyMeasure::small_jump_mean() const {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dim_);
  for (const auto& a : atoms_)
    if (a.location.norm() <= 1.0) c += a.weight * a.location;
  return c;
}

cplx stable_radial_exponent(double alpha, double u) {
  if (u == 0) return 0.0;
  const double au = std::abs(u);
  const double sgn = u > 0 ? 1.0 : -1.0;
  if (alpha == 1.0) {
    return cplx(-0.5 * std::numbers::pi * au, -u * std::log(au) + u * (1.0 - kEulerGamma));
  }
  const double g = std::tgamma(-alpha);
  const double ang = -0.5 * std::numbers::pi * alpha * sgn;
  return std::pow(au, alpha) * g * cplx(std::cos(ang), std::sin(ang)) + cplx(0.0, u / (alpha - 1.0));
}

cplx phi(const LevyMeasure& pi, const Eigen::VectorXd& xi) {
  if (pi.is_stable()) {
    const auto& st = pi.stable();
    cplx s = 0;
    for (const auto& a : st.atoms) s += a.weight * stable_radial_exponent(st.alpha, xi.dot(a.direction));
    return s;
  }
  cplx s = 0;
  for (const auto& a : pi.atoms()) {
    const double u = xi.dot(a.location);
    const double comp = a.location.norm() <= 1.0 ? u : 0.0;
    s += a.weight * cplx(std::cos(u) - 1.0, std::sin(u) - comp);
  }
  return s;
}

int polynomial_moment_order(const LevyMeasure& pi, int cap) {
  if (!pi.is_stable()) return cap;
  const double alpha = pi.stable().alpha;
  int n = static_cast<int>(std::ceil(alpha)) - 1;
  return std::min(n, cap);
}

MeasureDiagnostics measure_diagnostics(const LevyMeasure& pi, int n_max, const std::vector<double>& kappas) {
  MeasureDiagnostics d;
  d.log_moment = true;
  for (int n = 1; n <= n_max; ++n) d.poly_moment[n] = !pi.is_stable() || n < pi.stable().alpha;
  for (double k : kappas) d.exp_moment[k] = !pi.is_stable() || k <= 0;
  return d;
}

std::map<MultiIndex, double> levy_generator_moments(const LevyMeasure& pi, int max_order) {
  std::map<MultiIndex, double> nu;
  const int d = pi.dim();
  if (pi.is_stable()) {
    const auto& st = pi.stable();
    if (max_order >= 2 || (max_order >= 1 && st.alpha <= 1))
      throw Error(ErrorKind::DivergentMoment, "stable Levy measure has no moment of this order");
    if (max_order >= 1) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
      for (const auto& a : st.atoms) c += a.weight * a.direction / (st.alpha - 1.0);
      for (int i = 0; i < d; ++i) nu[MultiIndex::unit(d, i)] = c(i);
    }
    return nu;
  }
  for (int k = 1; k <= max_order; ++k) {
    for (const auto& m : multi_indices_of_order(d, k)) {
      double s = 0;
      for (const auto& a : pi.atoms()) {
        if (k == 1 && a.location.norm() <= 1.0) continue;
        s += a.weight * monomial_value(m, a.location);
      }
      nu[m] = s;
    }
  }
  return nu;
}

}  // namespace levyou
