#include "levyou/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "levyou/density.hpp"
#include "levyou/errors.hpp"
#include "levyou/io.hpp"
#include "levyou/polyspec.hpp"
#include "levyou/simulate.hpp"
#include "levyou/spectrum.hpp"

namespace levyou {

namespace {

using Rng = std::mt19937_64;

CheckResult pass(std::string d) { return {CheckStatus::Pass, std::move(d)}; }
CheckResult fail(std::string d) { return {CheckStatus::Fail, std::move(d)}; }
CheckResult skip(std::string d) { return {CheckStatus::Skip, std::move(d)}; }
CheckResult verdict(bool ok, std::string d) { return {ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(d)}; }

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Eigen::MatrixXd random_normal(Rng& rng, int r, int c) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(rng);
  return m;
}

// Random B shifted so that s(B) lies in [-1, -0.2].
Eigen::MatrixXd random_stable(Rng& rng, int d) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  Eigen::MatrixXd A = random_normal(rng, d, d) / std::sqrt(static_cast<double>(d));
  A.diagonal().array() -= spectral_abscissa(A) + u(rng);
  return A;
}

Eigen::MatrixXd random_psd(Rng& rng, int d) {
  const Eigen::MatrixXd C = random_normal(rng, d, d);
  return C * C.transpose() / d;
}

double max_abs(const Eigen::MatrixXd& m) { return m.cwiseAbs().maxCoeff(); }

bool finite_moments(const OuModel& m, int order) { return polynomial_moment_order(m.pi(), order) >= order; }

bool has_eigensystem(const OuModel& m) { return m.spectral().diagonalizable && m.spectral().M.has_value(); }

int poly_degree(const VerifyContext& c) { return std::min(6, c.degree_cap); }

// E p(e^{tB} x + N(0, Q_t)) for a possibly singular Q.
Poly gaussian_semigroup(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& B, double t, const Poly& p, int K) {
  CumulantTable c(static_cast<int>(B.rows()), K);
  c.add_covariance(gram_qt(Q, B, t));
  return compose_linear(shift_convolve(moments_from_cumulants(c), p), expm(B, t));
}

std::vector<Eigen::VectorXd> random_frequencies(Rng& rng, int d, int count, double scale) {
  std::vector<Eigen::VectorXd> out;
  for (int i = 0; i < count; ++i) out.push_back(scale * random_normal(rng, d, 1));
  return out;
}

// ---- matops ----

CheckResult gram_limit(const VerifyContext& c) {
  Rng rng(c.seed);
  double worst = 0;
  auto probe = [&](const Eigen::MatrixXd& Q, const Eigen::MatrixXd& B) {
    const double t = 40.0 / std::abs(spectral_abscissa(B));
    worst = std::max(worst, max_abs(gram_qt(Q, B, t) - qinf(Q, B)));
  };
  probe(c.model->Q(), c.model->B());
  for (int i = 0; i < 10; ++i) {
    const int d = 1 + i % 4;
    probe(random_psd(rng, d), random_stable(rng, d));
  }
  return verdict(worst <= 1e-8, fmt("max |Q_t - Q_inf| at t = 40/|s(B)|: %.3g", worst));
}

CheckResult expm_group_law(const VerifyContext& c) {
  Rng rng(c.seed + 1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Eigen::MatrixXd B = i == 0 ? c.model->B() : random_normal(rng, 1 + i % 4, 1 + i % 4);
    const double s = u(rng), t = u(rng);
    const Eigen::MatrixXd whole = expm(B, s + t);
    worst = std::max(worst, max_abs(whole - expm(B, s) * expm(B, t)) / max_abs(whole));
  }
  return verdict(worst <= 1e-11, fmt("max relative group-law defect: %.3g", worst));
}

CheckResult kalman_scale(const VerifyContext& c) {
  const int base = c.model->kalman();
  for (double s : {1e-3, 0.5, 7.0, 1e3}) {
    const int k = kalman_index(Eigen::MatrixXd(s * c.model->Q()), c.model->B());
    if (k != base) return fail(fmt("index changed under Q -> %g Q", s));
  }
  return pass("index " + std::to_string(base) + " stable under four rescalings");
}

CheckResult qinf_residual(const VerifyContext& c) {
  Rng rng(c.seed + 2);
  double worst = 0;
  auto probe = [&](const Eigen::MatrixXd& Q, const Eigen::MatrixXd& B) {
    const Eigen::MatrixXd X = qinf(Q, B);
    worst = std::max(worst, max_abs(B * X + X * B.transpose() + Q) / (1 + max_abs(Q)));
  };
  probe(c.model->Q(), c.model->B());
  for (int i = 0; i < 20; ++i) probe(random_psd(rng, 1 + i % 4), random_stable(rng, 1 + i % 4));
  return verdict(worst <= 1e-10, fmt("max scaled Lyapunov residual: %.3g", worst));
}

// ---- levy ----

CheckResult hermiticity(const VerifyContext& c) {
  const OuModel& m = *c.model;
  Rng rng(c.seed + 3);
  const TransitionExponent pt(m, 1.0), pinf(m, kInfiniteTime);
  double worst = 0;
  for (const auto& xi : random_frequencies(rng, m.dim(), 200, 1.5)) {
    auto defect = [&](cplx a, cplx b) { return std::abs(a - std::conj(b)) / (1 + std::abs(b)); };
    worst = std::max(worst, defect(psi(m, -xi), psi(m, xi)));
    worst = std::max(worst, defect(pt(-xi), pt(xi)));
    worst = std::max(worst, defect(pinf(-xi), pinf(xi)));
  }
  return verdict(worst <= 1e-10, fmt("max |Psi(-xi) - conj Psi(xi)|: %.3g", worst));
}

CheckResult flow_identity(const VerifyContext& c) {
  const OuModel& m = *c.model;
  Rng rng(c.seed + 4);
  const double s = 0.7, t = 0.5;
  const TransitionExponent pst(m, s + t), pt(m, t), ps(m, s);
  const Eigen::MatrixXd Et = m.flow(t).transpose();
  double worst = 0;
  for (const auto& xi : random_frequencies(rng, m.dim(), 20, 1.5)) {
    const cplx lhs = pst(xi);
    worst = std::max(worst, std::abs(lhs - pt(xi) - ps(Et * xi)) / (1 + std::abs(lhs)));
  }
  return verdict(worst <= 1e-9, fmt("max flow-identity defect: %.3g", worst));
}

CheckResult negative_definite(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const TransitionExponent pt(m, 1.0);
  const GridSpec g = GridSpec::uniform(m.dim(), 4.0, m.dim() <= 2 ? 16 : 4);
  double worst = -std::numeric_limits<double>::infinity();
  for (long k = 0; k < g.size(); ++k) worst = std::max(worst, pt(g.node_at(k)).real());
  return verdict(worst <= 1e-12, fmt("max Re Psi_1 on the frequency grid: %.3g", worst));
}

CheckResult stable_scaling(const VerifyContext& c) {
  const OuModel& m = *c.model;
  if (!m.pi().is_stable()) return skip("no stable jump part");
  const auto& st = m.pi().stable();
  if (st.alpha == 1.0) return skip("alpha = 1 has a logarithmic drift term");
  // Remove the linear term produced by the compensator, which does not scale.
  Eigen::VectorXd dir = Eigen::VectorXd::Zero(m.dim());
  for (const auto& a : st.atoms) dir += a.weight * a.direction;
  const Eigen::VectorXd drift = -m.B().fullPivLu().solve(dir) / (st.alpha - 1);
  const TransitionExponent pinf(m, kInfiniteTime);
  auto strict = [&](const Eigen::VectorXd& xi) { return pinf.jump_part(xi) - cplx(0, xi.dot(drift)); };
  Rng rng(c.seed + 5);
  double worst = 0;
  for (const auto& xi : random_frequencies(rng, m.dim(), 10, 1.0)) {
    const cplx base = strict(xi);
    for (double k : {0.5, 2.0, 3.0}) {
      const cplx scaled = strict(k * xi);
      worst = std::max(worst, std::abs(scaled - std::pow(k, st.alpha) * base) / (1 + std::abs(scaled)));
    }
  }
  return verdict(worst <= 1e-8, fmt("max alpha-scaling defect of the jump part: %.3g", worst));
}

// ---- density ----

CheckResult inversion_round_trip(const VerifyContext& c) {
  const GridSpec& g = c.grid;
  Eigen::VectorXd f(g.size());
  for (long k = 0; k < g.size(); ++k) {
    const Eigen::VectorXd x = g.node_at(k);
    double q = 0;
    for (int j = 0; j < g.dim(); ++j) {
      const double s = x(j) / (0.12 * g.halfwidth()[j]);
      q += s * s;
    }
    f(k) = std::exp(-0.5 * q) * (1 + 0.3 * std::sin(x(0)));
  }
  const Eigen::VectorXcd back = inverse_transform(g, forward_transform(g, f.cast<cplx>()));
  const double err = (back - f.cast<cplx>()).cwiseAbs().maxCoeff();
  return verdict(err <= 1e-10, fmt("max round-trip error: %.3g", err));
}

CheckResult stable_factorization(const VerifyContext& c) {
  const OuModel& m = *c.model;
  if (!m.pi().is_stable()) return skip("no stable jump part");
  if (max_abs(m.Q()) == 0) return skip("no Gaussian part");
  if (m.dim() > 2) return skip("direct convolution limited to d <= 2");
  const GridSpec g = m.dim() == 1 ? c.grid : GridSpec(c.grid.halfwidth(), {64, 64});
  const DensityField mu = invariant_density(m, g);
  const TransitionExponent pinf(m, kInfiniteTime);
  const Eigen::MatrixXd& S = m.q_inf();
  const DensityField jumps = density_from_cf(g, [&](const Eigen::VectorXd& xi) { return std::exp(pinf.jump_part(xi)); });
  const Eigen::MatrixXd Si = S.inverse();
  const double norm = 1.0 / std::sqrt(std::pow(2 * std::numbers::pi, m.dim()) * S.determinant());
  // Direct sum: (gauss * jumps)(x_k) = h^d sum_l gauss(x_k - x_l) jumps(x_l).
  // Compared on the inner half of the box, where the Gaussian kernel stays inside it.
  double worst = 0;
  for (long k = 0; k < g.size(); ++k) {
    const Eigen::VectorXd xk = g.node_at(k);
    bool inner = true;
    for (int j = 0; j < m.dim(); ++j) inner = inner && std::abs(xk(j)) <= 0.5 * g.halfwidth()[j];
    if (!inner) continue;
    double s = 0;
    for (long l = 0; l < g.size(); ++l) {
      const Eigen::VectorXd r = xk - g.node_at(l);
      s += norm * std::exp(-0.5 * r.dot(Si * r)) * jumps.values(l);
    }
    worst = std::max(worst, std::abs(s * g.cell_volume() - mu.values(k)));
  }
  return verdict(worst <= 1e-5, fmt("max |mu - gaussian * jump density|: %.3g", worst));
}

CheckResult transition_positivity(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const DensityField p = transition_density(m, 1.0, Eigen::VectorXd::Zero(m.dim()), c.grid);
  const double lo = p.values.minCoeff();
  return verdict(lo >= -1e-9 * std::max(1.0, p.values.maxCoeff()), fmt("min transition density value: %.3g", lo));
}

// Errors against the exact Gaussian law at N = 8, 16, 32 on a fixed box; the
// GridTooCoarse guard is bypassed on purpose since coarse grids are the point.
std::vector<double> gaussian_refinement_errors(const OuModel& base) {
  const OuModel m(base.Q(), base.B(), LevyMeasure::null(base.dim()));
  const GridSpec ref = default_grid(m);
  const Eigen::MatrixXd Si = m.q_inf().inverse();
  const double norm = 1.0 / std::sqrt(std::pow(2 * std::numbers::pi, m.dim()) * m.q_inf().determinant());
  const TransitionExponent pinf(m, kInfiniteTime);
  std::vector<double> errs;
  for (int N : {8, 16, 32}) {
    const GridSpec g(ref.halfwidth(), std::vector<int>(m.dim(), N));
    const Eigen::VectorXcd mu = inverse_transform(g, [&](const Eigen::VectorXd& xi) { return std::exp(pinf(xi)); });
    double err = 0;
    for (long k = 0; k < g.size(); ++k) {
      const Eigen::VectorXd x = g.node_at(k);
      err = std::max(err, std::abs(mu(k) - norm * std::exp(-0.5 * x.dot(Si * x))));
    }
    errs.push_back(err);
  }
  return errs;
}

CheckResult grid_refinement(const VerifyContext& c) {
  const auto errs = gaussian_refinement_errors(*c.model);
  bool ok = true;
  for (std::size_t i = 1; i < errs.size(); ++i)
    if (errs[i] > 1e-12) ok = ok && errs[i - 1] >= 4 * errs[i];
  char buf[160];
  std::snprintf(buf, sizeof buf, "max errors at N = 8/16/32: %.3g %.3g %.3g", errs[0], errs[1], errs[2]);
  return verdict(ok, buf);
}

// ---- polyspec ----

CheckResult intertwining(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = poly_degree(c);
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  const int d = m.dim();
  double worst = 0;
  const std::vector<double> times{0.3, 1.0, 3.0};
  auto probe = [&](const MomentKernel& k, const std::function<Poly(double, const Poly&)>& target) {
    for (const auto& a : multi_indices_up_to(d, K)) {
      const Poly p = Poly::monomial(a);
      const Poly kp = convolve_markov(k, p);
      for (double t : times) {
        const Poly lhs = convolve_markov(k, poly_semigroup_apply(m, t, p));
        worst = std::max(worst, max_coeff_diff(lhs, target(t, kp)));
      }
    }
  };
  for (double share : {0.0, 0.5}) {
    const Eigen::MatrixXd Qt = share * m.Q();
    probe(build_lambda(m, Qt, K), [&](double t, const Poly& p) { return gaussian_semigroup(Qt, m.B(), t, p, K); });
  }
  std::string extra = "Lambda_1, Lambda";
  if (has_eigensystem(m)) {
    const OuModel target = target_diffusion(m);
    probe(build_V(m, K), [&](double t, const Poly& p) { return poly_semigroup_apply(target, t, p); });
    extra += ", V";
  }
  return verdict(worst <= 1e-9, fmt("max coefficient residual: %.3g", worst) + " (" + extra + ")");
}

CheckResult eigen_relation(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = poly_degree(c);
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  if (!has_eigensystem(m)) return skip("B is not real-diagonalizable");
  const EigenSystem sys(m, K);
  double worst = 0;
  for (const auto& n : multi_indices_up_to(m.dim(), K)) {
    const Poly H = sys.H(n);
    for (double t : {0.3, 1.0, 3.0})
      worst = std::max(worst, max_coeff_diff(poly_semigroup_apply(m, t, H), std::exp(-t * sys.eigenvalue(n)) * H));
  }
  return verdict(worst <= 1e-9, fmt("max coefficient residual: %.3g", worst));
}

CheckResult span_property(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = poly_degree(c);
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  if (!has_eigensystem(m)) return skip("B is not real-diagonalizable");
  const EigenSystem sys(m, K);
  const MonomialBasis basis(m.dim(), K);
  Eigen::MatrixXd C(basis.size(), basis.size());
  const auto idx = multi_indices_up_to(m.dim(), K);
  for (std::size_t i = 0; i < idx.size(); ++i) C.col(static_cast<Eigen::Index>(i)) = basis.coefficients(sys.H(idx[i]));
  const int r = numerical_rank(C);
  return verdict(r == basis.size(), "rank " + std::to_string(r) + " of " + std::to_string(basis.size()));
}

// Peaks a_k = max_{|n| = k} sup_x |H_n(x)| e^{-eps |x|^2}. Peaks alternate with the
// parity of k, so growth is measured by the two-step rate (a_k / a_{k-2})^{1/2}:
// the largest rate up to degree K/2 + 1 is the fitted constant.
CheckResult growth(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = std::min(8, c.degree_cap);
  if (K < 6) return skip("degree cap below 6");
  if (m.dim() > 3) return skip("sampling box limited to d <= 3");
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  if (!has_eigensystem(m)) return skip("B is not real-diagonalizable");
  const EigenSystem sys(m, K);
  const double eps = 0.25 * sys.scaling().cwiseAbs2().maxCoeff();
  const GridSpec box = GridSpec::uniform(m.dim(), 2 * std::sqrt(K / eps), m.dim() == 1 ? 1024 : (m.dim() == 2 ? 128 : 32));
  std::vector<double> peak(K + 1, 0.0);
  for (const auto& n : multi_indices_up_to(m.dim(), K)) {
    const Poly H = sys.H(n);
    for (long k = 0; k < box.size(); ++k) {
      const Eigen::VectorXd x = box.node_at(k);
      peak[n.order()] = std::max(peak[n.order()], std::abs(H(x)) * std::exp(-eps * x.squaredNorm()));
    }
  }
  auto rate = [&](int k) { return std::sqrt(peak[k] / peak[k - 2]); };
  const int fit = K / 2 + 1;
  double bound = 0;
  for (int k = 2; k <= fit; ++k) bound = std::max(bound, rate(k));
  double worst = 0;
  for (int k = fit + 1; k <= K; ++k) worst = std::max(worst, rate(k));
  return verdict(worst <= 1.1 * bound, fmt("fitted rate %.4g, later rates up to %.4g", bound, worst));
}

CheckResult triangularity(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = poly_degree(c);
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  std::vector<MomentKernel> kernels{build_lambda(m, Eigen::MatrixXd::Zero(m.dim(), m.dim()), K)};
  if (has_eigensystem(m)) kernels.push_back(build_V(m, K));
  double worst = 0;
  for (const auto& k : kernels) {
    const Eigen::MatrixXd A = k.pre_map().value_or(Eigen::MatrixXd::Identity(m.dim(), m.dim()));
    for (const auto& a : multi_indices_up_to(m.dim(), K)) {
      const Poly p = Poly::monomial(a);
      const Poly q = convolve_markov(k, p);
      if (q.pruned(1e-12).degree() > p.degree()) return fail("degree raised for x^" + a.str());
      worst = std::max(worst, max_coeff_diff(q.homogeneous_part(a.order()), compose_linear(p, A)));
    }
  }
  return verdict(worst <= 1e-10, fmt("max leading-part defect: %.3g", worst));
}

// ---- spectrum ----

CheckResult lattice_operator(const VerifyContext& c) {
  const OuModel& m = *c.model;
  if (!has_eigensystem(m)) return skip("B is not real-diagonalizable");
  const Eigen::VectorXd& rates = m.spectral().rates;
  double worst = 0;
  for (int k = 1; k <= 6; ++k) {
    const Eigen::VectorXcd ev = drift_operator_matrix(m.B(), k).eigenvalues();
    std::vector<double> got, want;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      got.push_back(ev(i).real());
      worst = std::max(worst, std::abs(ev(i).imag()));
    }
    for (const auto& n : multi_indices_of_order(m.dim(), k)) {
      double s = 0;
      for (int j = 0; j < m.dim(); ++j) s += n[j] * rates(j);
      want.push_back(-s);
    }
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
  }
  return verdict(worst <= 1e-9, fmt("max eigenvalue mismatch: %.3g", worst));
}

CheckResult isospectrality(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = poly_degree(c);
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  return verdict(isospectrality_check(m, K), "generator and drift tables up to degree " + std::to_string(K));
}

// Evaluated in log space: far from x the product underflows doubles although it
// is positive, so positivity means a finite logarithm.
CheckResult mehler_positivity(const VerifyContext& c) {
  const OuModel& m = *c.model;
  if (!m.pi().is_null()) return skip("Mehler kernel needs a Gaussian model");
  const GridSpec g = m.dim() <= 2 ? c.grid : GridSpec(c.grid.halfwidth(), std::vector<int>(m.dim(), 8));
  // mu is N(0, Q_inf) here.
  const Eigen::MatrixXd Si = m.q_inf().inverse();
  const double log_norm = -0.5 * std::log(std::pow(2 * std::numbers::pi, m.dim()) * m.q_inf().determinant());
  double lo = std::numeric_limits<double>::infinity();
  bool finite = true;
  for (double x0 : {-1.0, 0.0, 1.0}) {
    const Eigen::VectorXd x = Eigen::VectorXd::Constant(m.dim(), x0);
    const Eigen::VectorXd lb = mehler_log_closed_form(m, 1.0, x, g);
    for (long k = 0; k < g.size(); ++k) {
      const Eigen::VectorXd y = g.node_at(k);
      const double v = lb(k) + log_norm - 0.5 * y.dot(Si * y);
      finite = finite && std::isfinite(v);
      lo = std::min(lo, v);
    }
  }
  return verdict(finite, fmt("min log(closedForm * mu) on the grid: %.4g", lo));
}

CheckResult spectral_exactness(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const int K = std::min(4, c.degree_cap);
  if (!finite_moments(m, K)) return skip("Levy measure lacks polynomial moments");
  if (!has_eigensystem(m)) return skip("B is not real-diagonalizable");
  Rng rng(c.seed + 6);
  std::normal_distribution<double> n;
  Poly p(m.dim());
  for (const auto& a : multi_indices_up_to(m.dim(), K)) p.add_term(a, n(rng));
  double worst = 0;
  for (double t : {0.1, 1.0, 10.0})
    worst = std::max(worst, max_coeff_diff(spectral_apply(m, t, p, K), poly_semigroup_apply(m, t, p)));
  return verdict(worst <= 1e-9, fmt("max coefficient residual: %.3g", worst));
}

// ---- simulate ----

CheckResult long_run_ks(const VerifyContext& c) {
  const OuModel& m = *c.model;
  const long N = 100000;
  const double t = 40.0 / std::abs(m.abscissa());
  SampleOptions opts;
  opts.seed = c.seed;
  const Eigen::MatrixXd s = sample_transition(m, t, Eigen::VectorXd::Zero(m.dim()), N, opts);
  const DensityField f = marginal(invariant_density(m, c.grid), 0);
  const GridSpec& g = f.grid;
  const double h = g.spacing(0);
  const int P = g.points()[0];
  // Trapezoid CDF at the nodes, linear in between.
  std::vector<double> cdf(P);
  double acc = 0;
  for (int k = 0; k < P; ++k) {
    cdf[k] = acc + 0.5 * h * f.values(k);
    acc += h * f.values(k);
  }
  auto F = [&](double x) {
    const double u = (x - g.node(0, 0)) / h;
    if (u <= 0) return 0.0;
    if (u >= P - 1) return 1.0;
    const int k = static_cast<int>(u);
    return cdf[k] + (u - k) * (cdf[k + 1] - cdf[k]);
  };
  std::vector<double> x(s.col(0).data(), s.col(0).data() + N);
  std::sort(x.begin(), x.end());
  double D = 0;
  for (long i = 0; i < N; ++i) {
    const double Fx = F(x[i]);
    D = std::max({D, std::abs(Fx - static_cast<double>(i) / N), std::abs(static_cast<double>(i + 1) / N - Fx)});
  }
  const double crit = 1.628 / std::sqrt(static_cast<double>(N));
  return verdict(D <= 2 * crit, fmt("KS distance %.4g, bound %.4g", D, 2 * crit));
}

CheckResult compensator(const VerifyContext& c) {
  const OuModel& m = *c.model;
  if (m.pi().is_stable() || m.pi().atoms().empty()) return skip("no finite jump part");
  for (const auto& a : m.pi().atoms())
    if (a.location.norm() > 1) return skip("atoms outside the unit ball");
  const double t = 1.0;
  const long N = 100000;
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(m.dim(), 0.5);
  SampleOptions opts;
  opts.seed = c.seed + 7;
  const Eigen::MatrixXd s = sample_transition(m, t, x, N, opts);
  const Eigen::RowVectorXd shift = (m.flow(t) * x).transpose();
  const Eigen::MatrixXd z = s.rowwise() - shift;
  const Eigen::RowVectorXd mean = z.colwise().mean();
  const Eigen::RowVectorXd sd = ((z.rowwise() - mean).cwiseAbs2().colwise().sum() / (N - 1)).cwiseSqrt();
  const double kappa1 = cumulants_at(m, t, 1).mean().cwiseAbs().maxCoeff();
  double worst = 0;
  for (int j = 0; j < m.dim(); ++j) worst = std::max(worst, std::abs(mean(j)) / (sd(j) / std::sqrt(double(N))));
  return verdict(worst <= 3 && kappa1 <= 1e-12, fmt("max |mean| / stderr %.3g, |kappa_1| %.3g", worst, kappa1));
}

CheckResult stable_scheme(const VerifyContext& c) {
  const OuModel& m = *c.model;
  if (!m.pi().is_stable()) return skip("no stable jump part");
  const long N = 100000;
  const double t = 1.0;
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(m.dim());
  SampleOptions coarse, fine;
  coarse.seed = c.seed + 8;
  fine.seed = c.seed + 9;
  coarse.time_step = 1.0 / 64;
  fine.time_step = 1.0 / 128;
  const Eigen::MatrixXd a = sample_transition(m, t, x, N, coarse);
  const Eigen::MatrixXd b = sample_transition(m, t, x, N, fine);
  const double floor = 3 * std::sqrt(2.0 / N);
  double worst = 0;
  for (double k : {0.5, 1.0, 2.0}) {
    const Eigen::VectorXd xi = k * Eigen::VectorXd::Unit(m.dim(), 0);
    worst = std::max(worst, std::abs(empirical_cf(a, xi) - empirical_cf(b, xi)));
  }
  return verdict(worst <= floor, fmt("max cf change %.3g, noise floor %.3g", worst, floor));
}

std::vector<InvariantCheck> make_registry() {
  return {
      {"matops", "gram_qt converges to qinf", gram_limit},
      {"matops", "expm group law", expm_group_law},
      {"matops", "kalman_index scale invariance", kalman_scale},
      {"matops", "qinf Lyapunov residual", qinf_residual},
      {"levy", "exponent hermiticity", hermiticity},
      {"levy", "exponent flow identity", flow_identity},
      {"levy", "Re Psi_t <= 0", negative_definite},
      {"levy", "stable jump part scaling", stable_scaling},
      {"density", "inversion round trip", inversion_round_trip},
      {"density", "mu = gaussian * stable factor", stable_factorization},
      {"density", "transition density positivity", transition_positivity},
      {"density", "grid refinement ratio", grid_refinement},
      {"polyspec", "intertwining on polynomials", intertwining},
      {"polyspec", "eigen-relation", eigen_relation},
      {"polyspec", "H_n span the polynomials", span_property},
      {"polyspec", "geometric growth of H_n", growth},
      {"polyspec", "degree triangularity", triangularity},
      {"spectrum", "lattice matches drift operator", lattice_operator},
      {"spectrum", "isospectrality", isospectrality},
      {"spectrum", "Mehler positivity", mehler_positivity},
      {"spectrum", "spectral_apply exact on polynomials", spectral_exactness},
      {"simulate", "long-run KS against mu", long_run_ks},
      {"simulate", "compensator mean", compensator},
      {"simulate", "stable scheme step halving", stable_scheme},
  };
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::Skip: return "SKIP";
  }
  return "FAIL";
}

const std::vector<InvariantCheck>& invariant_registry() {
  static const std::vector<InvariantCheck> registry = make_registry();
  return registry;
}

bool VerifyReport::all_passed() const {
  return std::none_of(rows.begin(), rows.end(), [](const VerifyRow& r) { return r.result.status == CheckStatus::Fail; });
}

VerifyReport run_verification(const VerifyContext& ctx) {
  VerifyReport rep;
  for (const auto& check : invariant_registry()) {
    VerifyRow row{&check, {}, 0};
    const auto start = std::chrono::steady_clock::now();
    try {
      row.result = check.run(ctx);
    } catch (const std::exception& e) {
      row.result = fail(std::string("exception: ") + e.what());
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::string verify_table(const VerifyReport& r) {
  std::ostringstream os;
  for (const auto& row : r.rows) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%-4s  %-8s  %-40s  ", to_string(row.result.status), row.check->module.c_str(),
                  row.check->name.c_str());
    os << buf << row.result.detail << '\n';
  }
  return os.str();
}

std::string verify_json(const VerifyReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"module", row.check->module},
                    {"name", row.check->name},
                    {"status", to_string(row.result.status)},
                    {"detail", row.result.detail}});
  return dump_json({{"checks", rows}, {"all_passed", r.all_passed()}});
}

}  // namespace levyou
