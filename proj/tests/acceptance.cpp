// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "levyou/density.hpp"
#include "levyou/io.hpp"
#include "levyou/matops.hpp"
#include "levyou/polyspec.hpp"
#include "levyou/simulate.hpp"
#include "levyou/spectrum.hpp"
#include "levyou/verify.hpp"

using namespace levyou;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

Config fixture(const std::string& name) { return load_config(std::string(LEVYOU_FIXTURES) + "/" + name + ".json"); }

Eigen::VectorXd v1(double x) { return Eigen::VectorXd::Constant(1, x); }

Outcome gramian_identity() {
  std::mt19937_64 rng(20240601);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> margin(0.2, 1.0);
  std::uniform_int_distribution<int> dim(1, 4);
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dim(rng);
    Eigen::MatrixXd A(d, d), C(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        A(i, j) = gauss(rng);
        C(i, j) = gauss(rng);
      }
    const double s = spectral_abscissa(A);
    const Eigen::MatrixXd B = A - (s + margin(rng)) * Eigen::MatrixXd::Identity(d, d);
    const Eigen::MatrixXd Q = C * C.transpose();
    const Eigen::MatrixXd Qi = qinf(Q, B);
    for (double t : {0.1, 1.0, 10.0}) {
      const Eigen::MatrixXd E = expm(B, t);
      worst = std::max(worst, (gram_qt(Q, B, t) - (Qi - E * Qi * E.transpose())).cwiseAbs().maxCoeff());
    }
  }
  return {worst <= 1e-10, fmt("max error %.3g over 50 models", worst)};
}

Outcome characteristic_function() {
  const Config c = fixture("cp1d");
  const OuModel& m = c.model;
  const long N = 1000000;
  const double bound = 3.0 / std::sqrt(double(N));
  const Eigen::VectorXd x = v1(0.3);
  SampleOptions opts;
  opts.seed = c.seed;
  double worst = 0;
  for (double t : {0.5, 2.0}) {
    const Eigen::MatrixXd S = sample_transition(m, t, x, N, opts);
    for (double xi : {-2.0, -0.5, 0.7, 1.3, 3.0}) {
      const Eigen::VectorXd v = v1(xi);
      const cplx want = std::exp(psi_t(m, t, v) + cplx(0, (m.flow(t).transpose() * v).dot(x)));
      worst = std::max(worst, std::abs(empirical_cf(S, v) - want));
    }
  }
  return {worst <= bound, fmt("max |cf error| %.3g, bound %.3g", worst, bound)};
}

Outcome eigen_relation() {
  double worst = 0;
  for (const char* name : {"kinetic_fp", "cp1d"}) {
    const Config c = fixture(name);
    const EigenSystem sys(c.model, 6);
    for (const auto& n : multi_indices_up_to(c.model.dim(), 6)) {
      const Poly H = sys.H(n);
      for (double t : {0.3, 1.0, 3.0})
        worst = std::max(worst, max_coeff_diff(poly_semigroup_apply(c.model, t, H), std::exp(-t * sys.eigenvalue(n)) * H));
    }
  }
  return {worst <= 1e-9, fmt("max coefficient residual %.3g", worst)};
}

Outcome biorthogonality() {
  double exact = 0, grid = 0;
  for (const char* name : {"kinetic_fp", "cp1d"}) {
    const Config c = fixture(name);
    const EigenSystem sys(c.model, 3);
    // cp1d needs a box wider than the default 8-sigma one: the polynomial
    // weights grow faster than the right tail of mu decays.
    const GridSpec g = c.model.dim() == 1 ? GridSpec::uniform(1, 16.0, 256) : default_grid(c.model);
    const auto idx = multi_indices_up_to(c.model.dim(), 3);
    for (const auto& n : idx)
      for (const auto& k : idx) {
        const double want = n == k ? 1.0 : 0.0;
        exact = std::max(exact, std::abs(sys.pairing(sys.H(n), k) - want));
        grid = std::max(grid, std::abs(biorthogonality_grid(sys, n, k, g) - want));
      }
  }
  return {exact <= 1e-12 && grid <= 1e-5, fmt("exact pairing %.3g, grid quadrature %.3g", exact, grid)};
}

Outcome coeigen_proportionality() {
  double spread = 0, resid = 0;
  for (const char* name : {"kinetic_fp", "cp1d"}) {
    const Config c = fixture(name);
    const EigenSystem sys(c.model, 3);
    const GridSpec g1 = default_grid(c.model);
    std::vector<double> L2 = g1.halfwidth();
    for (double& l : L2) l *= 1.25;
    std::vector<int> N2 = g1.points();
    for (int& n : N2) n *= 2;
    const GridSpec g2(L2, N2);
    for (const auto& n : multi_indices_up_to(c.model.dim(), 3)) {
      const auto p1 = fit_proportional(sys.derivative_field(n, g1).values, sys.coeigen_density_operator(n, g1).values);
      const auto p2 = fit_proportional(sys.derivative_field(n, g2).values, sys.coeigen_density_operator(n, g2).values);
      spread = std::max(spread, std::abs(p1.constant - p2.constant) / std::abs(p1.constant));
      resid = std::max({resid, p1.residual, p2.residual});
    }
  }
  return {spread <= 1e-4 && resid <= 1e-4,
          fmt("c_n relative spread across grids %.3g, proportionality residual %.3g", spread, resid)};
}

Outcome mehler() {
  const Config c = fixture("gauss1d");
  const OuModel& m = c.model;
  const double t = 3.0;
  const GridSpec g = default_grid(m);
  const DensityField mu = invariant_density(m, g);
  double series = 0, density = 0;
  for (double x : {-1.0, 0.0, 1.0}) {
    const DensityField p = transition_density(m, t, v1(x), g);
    for (double y : {-1.0, 0.0, 1.0}) {
      const MehlerValue v = mehler_kernel(m, t, v1(x), v1(y), 20);
      series = std::max(series, std::abs(v.series - v.closed_form));
      const long k = std::lround((y + g.halfwidth()[0]) / g.spacing(0));
      density = std::max(density, std::abs(v.closed_form * mu.values(k) - p.values(k)));
    }
  }
  return {series <= 1e-6 && density <= 1e-6, fmt("series gap %.3g, closed form times mu vs density %.3g", series, density)};
}

Outcome intertwining() {
  const auto& reg = invariant_registry();
  const InvariantCheck* check = nullptr;
  for (const auto& r : reg)
    if (r.name == "intertwining on polynomials") check = &r;
  if (!check) return {false, "intertwining check not registered"};
  std::string detail;
  bool ok = true;
  for (const char* name : {"kinetic_fp", "cp1d"}) {
    const Config c = fixture(name);
    VerifyContext ctx{&c.model, default_grid(c.model), 6, c.seed};
    const CheckResult r = check->run(ctx);
    ok = ok && r.status == CheckStatus::Pass;
    detail += std::string(detail.empty() ? "" : "; ") + name + ": " + r.detail;
  }
  return {ok, detail};
}

Outcome multiplicity_tables() {
  std::vector<std::pair<std::string, OuModel>> models;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd Bd(2, 2), Bj(2, 2);
  Bd << -1, 0, 0, -2;
  Bj << -1, 1, 0, -1;
  models.emplace_back("diag(-1,-2)", OuModel(I, Bd, LevyMeasure::null(2)));
  models.emplace_back("jordan", OuModel(I, Bj, LevyMeasure::null(2)));
  models.emplace_back("kinetic_fp", fixture("kinetic_fp").model);
  bool ok = true;
  std::string detail;
  for (const auto& [name, m] : models) {
    bool semisimple = true, agree = true;
    for (const auto& row : multiplicity_table(m, 6)) {
      agree = agree && row.drift == row.generator;
      semisimple = semisimple && row.drift.algebraic == row.drift.geometric;
    }
    const bool consistent = semisimple == m.spectral().diagonalizable;
    ok = ok && agree && consistent;
    detail += (detail.empty() ? "" : "; ") + name + (agree ? " tables agree" : " tables differ") +
              (consistent ? "" : ", semisimplicity mismatch");
  }
  return {ok, detail};
}

Outcome generating_function() {
  const Config c = fixture("cp1d");
  const EigenSystem sys(c.model, 6);
  double worst = 0;
  for (const auto& n : multi_indices_up_to(1, 6)) worst = std::max(worst, max_coeff_diff(sys.H(n), sys.H_generating(n)));
  return {worst <= 1e-9, fmt("max coefficient difference %.3g", worst)};
}

Outcome compactness() {
  const std::vector<std::pair<const char*, CompactnessVerdict>> cases{
      {"stable1d", CompactnessVerdict::NonCompactNecessaryFail},
      {"cp1d", CompactnessVerdict::CompactSufficient},
      {"gauss1d", CompactnessVerdict::CompactSufficient}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, want] : cases) {
    const Config c = fixture(name);
    const auto rep = compactness_diagnostic(c.model, c.grid ? *c.grid : default_grid(c.model));
    ok = ok && rep.verdict == want;
    detail += std::string(detail.empty() ? "" : ", ") + name + " -> " + to_string(rep.verdict);
  }
  return {ok, detail};
}

Outcome density_accuracy() {
  const Config c = fixture("gauss1d");
  const OuModel& m = c.model;
  const double var = m.q_inf()(0, 0);
  auto exact = [&](double x) { return std::exp(-0.5 * x * x / var) / std::sqrt(2 * std::numbers::pi * var); };
  const GridSpec g = default_grid(m);
  const DensityField mu = invariant_density(m, g);
  double err = 0;
  for (long k = 0; k < g.size(); ++k) err = std::max(err, std::abs(mu.values(k) - exact(g.node_at(k)(0))));
  const TransitionExponent pinf(m, kInfiniteTime);
  std::vector<double> errs;
  for (int N : {8, 16, 32}) {
    const GridSpec gr(g.halfwidth(), {N});
    const Eigen::VectorXcd f = inverse_transform(gr, [&](const Eigen::VectorXd& xi) { return std::exp(pinf(xi)); });
    double e = 0;
    for (long k = 0; k < gr.size(); ++k) e = std::max(e, std::abs(f(k) - exact(gr.node_at(k)(0))));
    errs.push_back(e);
  }
  bool ratio_ok = true;
  for (std::size_t i = 1; i < errs.size(); ++i)
    if (errs[i] > 1e-12) ratio_ok = ratio_ok && errs[i - 1] >= 4 * errs[i];
  char buf[200];
  std::snprintf(buf, sizeof buf, "N=256 error %.3g; refinement errors %.3g %.3g %.3g", err, errs[0], errs[1], errs[2]);
  return {err <= 1e-6 && ratio_ok, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"Gramian identity", gramian_identity},
      {"characteristic function of sampled transitions", characteristic_function},
      {"eigen-relation of H_n", eigen_relation},
      {"biorthogonality of H_n and G_m", biorthogonality},
      {"co-eigenfunction proportionality", coeigen_proportionality},
      {"Mehler identity", mehler},
      {"intertwining identities", intertwining},
      {"multiplicity tables", multiplicity_tables},
      {"generating function vs V^{-1} h_n", generating_function},
      {"compactness diagnostics", compactness},
      {"density accuracy and refinement", density_accuracy},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("[%s] %zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
