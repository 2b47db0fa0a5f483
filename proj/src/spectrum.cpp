#include "levyou/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyou/errors.hpp"
#include "levyou/io.hpp"
#include "levyou/levy.hpp"

namespace levyou {

namespace {

constexpr long kLatticeLimit = 1000000;

void enumerate_lattice(const Eigen::VectorXd& rates, double budget, int axis, std::vector<int>& cur,
                       std::vector<std::pair<double, MultiIndex>>& out, double acc) {
  const int d = static_cast<int>(rates.size());
  if (axis == d) {
    if (static_cast<long>(out.size()) >= kLatticeLimit)
      throw Error(ErrorKind::CutoffTooLarge, "lattice enumeration exceeds 10^6 multi-indices");
    out.emplace_back(acc, MultiIndex(cur));
    return;
  }
  for (int k = 0; acc + k * rates(axis) <= budget; ++k) {
    cur[axis] = k;
    enumerate_lattice(rates, budget, axis + 1, cur, out, acc + k * rates(axis));
  }
  cur[axis] = 0;
}

std::vector<LatticePoint> group_values(std::vector<std::pair<double, MultiIndex>> pts, double tol) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  std::vector<LatticePoint> out;
  for (auto& [v, n] : pts) {
    if (out.empty() || v - out.back().theta > tol) out.push_back({v, 0, {}});
    out.back().multiplicity++;
    out.back().reps.push_back(std::move(n));
  }
  return out;
}

// Orthonormal basis of {v : A v = 0} with singular values <= tau treated as zero.
Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double tau) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tau) ++rank;
  return svd.matrixV().rightCols(A.cols() - rank);
}

}  // namespace

std::vector<LatticePoint> lattice(const Eigen::VectorXd& rates, double Theta) {
  if ((rates.array() <= 0).any()) throw Error(ErrorKind::InvalidArgument, "rates must be positive");
  std::vector<std::pair<double, MultiIndex>> pts;
  std::vector<int> cur(rates.size(), 0);
  const double tol = 1e-9 * (1 + std::abs(Theta));
  enumerate_lattice(rates, Theta + tol, 0, cur, pts, 0.0);
  return group_values(std::move(pts), tol);
}

Eigen::MatrixXd drift_operator_matrix(const Eigen::MatrixXd& B, int k) {
  const int d = static_cast<int>(B.rows());
  const auto idx = multi_indices_of_order(d, k);
  std::map<MultiIndex, int> pos;
  for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<int>(i);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  // L x^m = sum_i m_i x^{m - e_i} sum_j B_ij x_j
  for (std::size_t c = 0; c < idx.size(); ++c) {
    const MultiIndex& m = idx[c];
    for (int i = 0; i < d; ++i) {
      if (m[i] == 0) continue;
      for (int j = 0; j < d; ++j) {
        if (B(i, j) == 0) continue;
        const MultiIndex target = m - MultiIndex::unit(d, i) + MultiIndex::unit(d, j);
        L(pos[target], static_cast<Eigen::Index>(c)) += m[i] * B(i, j);
      }
    }
  }
  return L;
}

Poly generator_apply(const OuModel& model, const Poly& p) {
  const int d = model.dim();
  Poly out(d);
  for (int i = 0; i < d; ++i) {
    const Poly di = p.derivative(i);
    out += Poly::linear(model.B().row(i).transpose()) * di;
    for (int j = 0; j < d; ++j)
      if (model.Q()(i, j) != 0) out += (0.5 * model.Q()(i, j)) * di.derivative(j);
  }
  if (!model.pi().is_null() && p.degree() >= 1) {
    const auto nu = levy_generator_moments(model.pi(), p.degree());
    for (const auto& [alpha, c] : p.terms()) {
      for (const auto& [beta, v] : nu) {
        if (!beta.dominated_by(alpha) || v == 0) continue;
        out.add_term(alpha - beta, c * binomial(alpha, beta) * v);
      }
    }
  }
  return out;
}

Multiplicity matrix_multiplicity(const Eigen::MatrixXd& T, double theta) {
  const Eigen::Index n = T.rows();
  const Eigen::MatrixXd N = T - theta * Eigen::MatrixXd::Identity(n, n);
  const double tau = 1e-9 * std::max(1.0, N.norm());
  Multiplicity m;
  Eigen::MatrixXd U = null_space(N, tau);
  m.geometric = static_cast<int>(U.cols());
  if (m.geometric == 0) return m;
  int r = 1;
  while (true) {
    const Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n, n) - U * U.transpose();
    Eigen::MatrixXd next = null_space(P * N, tau);
    if (next.cols() == U.cols()) break;
    U = std::move(next);
    ++r;
  }
  m.algebraic = static_cast<int>(U.cols());
  m.index = r;
  return m;
}

namespace {

Eigen::MatrixXd drift_full_matrix(const Eigen::MatrixXd& B, int k_max) {
  const MonomialBasis basis(static_cast<int>(B.rows()), k_max);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(basis.size(), basis.size());
  for (int k = 0; k <= k_max; ++k) {
    const auto [b, e] = basis.degree_block(k);
    L.block(b, b, e - b, e - b) = drift_operator_matrix(B, k);
  }
  return L;
}

}  // namespace

Multiplicity multiplicities(const Eigen::MatrixXd& B, double theta, int k_max) {
  const double s = spectral_abscissa(B);
  if (s >= 0) throw Error(ErrorKind::UnstableDrift, "s(B) >= 0");
  const int bound = static_cast<int>(std::ceil(std::abs(theta / s) - 1e-9)) + 1;
  if (k_max < bound)
    throw Error(ErrorKind::CutoffTooSmall, "degree cutoff " + std::to_string(k_max) + " below bound " + std::to_string(bound));
  return matrix_multiplicity(drift_full_matrix(B, k_max), theta);
}

std::vector<MultiplicityRow> multiplicity_table(const OuModel& model, int k_max) {
  const auto& spec = model.spectral();
  if (!spec.real_spectrum) throw Error(ErrorKind::InvalidArgument, "multiplicity tables need a real spectrum");
  const int d = model.dim();
  std::vector<std::pair<double, MultiIndex>> pts;
  for (const auto& n : multi_indices_up_to(d, k_max)) {
    double v = 0;
    for (int j = 0; j < d; ++j) v += n[j] * spec.rates(j);
    pts.emplace_back(v, n);
  }
  const double top = k_max * spec.rates.maxCoeff();
  const auto groups = group_values(std::move(pts), 1e-9 * (1 + top));

  const MonomialBasis basis(d, k_max);
  const Eigen::MatrixXd L = drift_full_matrix(model.B(), k_max);
  const Eigen::MatrixXd A = basis.operator_matrix([&](const Poly& p) { return generator_apply(model, p); });
  std::vector<MultiplicityRow> rows;
  for (const auto& g : groups) {
    MultiplicityRow row;
    row.theta = 0.0 - g.theta;
    row.drift = matrix_multiplicity(L, row.theta);
    row.generator = matrix_multiplicity(A, row.theta);
    rows.push_back(row);
  }
  return rows;
}

bool isospectrality_check(const OuModel& model, int k_max) {
  for (const auto& row : multiplicity_table(model, k_max))
    if (!(row.drift == row.generator)) return false;
  return true;
}

Poly spectral_apply(const OuModel& model, double t, const Poly& p, int N) {
  if (p.degree() > N) throw Error(ErrorKind::IncompleteTable, "truncation order below polynomial degree");
  const EigenSystem sys(model, N);
  Poly out(model.dim());
  for (const auto& n : multi_indices_up_to(model.dim(), N)) {
    const double c = sys.pairing(p, n);
    if (c == 0) continue;
    out += (std::exp(-t * sys.eigenvalue(n)) * c) * sys.H(n);
  }
  return out;
}

MehlerValue mehler_kernel(const OuModel& model, double t, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int N) {
  if (!model.pi().is_null()) throw Error(ErrorKind::InvalidArgument, "Mehler kernel needs a Gaussian model");
  if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "Mehler kernel needs t > 0");
  const EigenSystem sys(model, N);
  MehlerValue v;
  for (const auto& n : multi_indices_up_to(model.dim(), N))
    v.series += std::exp(-t * sys.eigenvalue(n)) * sys.H(n)(x) * sys.gaussian_G(n)(y);
  const Eigen::MatrixXd Qt = gram_qt(model.Q(), model.B(), t);
  const Eigen::MatrixXd& Qi = model.q_inf();
  const Eigen::VectorXd r = model.flow(t) * x - y;
  const double quad = y.dot(Qi.ldlt().solve(y)) - r.dot(Qt.ldlt().solve(r));
  v.closed_form = std::sqrt(Qi.determinant() / Qt.determinant()) * std::exp(0.5 * quad);
  return v;
}

Eigen::VectorXd mehler_log_closed_form(const OuModel& model, double t, const Eigen::VectorXd& x, const GridSpec& grid) {
  if (!model.pi().is_null()) throw Error(ErrorKind::InvalidArgument, "Mehler kernel needs a Gaussian model");
  if (!(t > 0)) throw Error(ErrorKind::InvalidArgument, "Mehler kernel needs t > 0");
  const Eigen::MatrixXd Qt = gram_qt(model.Q(), model.B(), t);
  const Eigen::MatrixXd& Qi = model.q_inf();
  const auto Qt_ldlt = Qt.ldlt();
  const auto Qi_ldlt = Qi.ldlt();
  const double log_scale = 0.5 * (std::log(Qi.determinant()) - std::log(Qt.determinant()));
  const Eigen::VectorXd ex = model.flow(t) * x;
  Eigen::VectorXd out(grid.size());
  for (long k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXd y = grid.node_at(k);
    const Eigen::VectorXd r = ex - y;
    out(k) = log_scale + 0.5 * (y.dot(Qi_ldlt.solve(y)) - r.dot(Qt_ldlt.solve(r)));
  }
  return out;
}

const char* to_string(CompactnessVerdict v) {
  switch (v) {
    case CompactnessVerdict::CompactSufficient: return "CompactSufficient";
    case CompactnessVerdict::NonCompactNecessaryFail: return "NonCompactNecessaryFail";
    case CompactnessVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

CompactnessReport compactness_diagnostic(const OuModel& model, const GridSpec& grid) {
  CompactnessReport rep;
  const auto diag = measure_diagnostics(model.pi(), 4, {});
  for (const auto& [n, ok] : diag.poly_moment) {
    if (!ok) {
      rep.verdict = CompactnessVerdict::NonCompactNecessaryFail;
      rep.detail = "Levy measure lacks a polynomial moment of order " + std::to_string(n);
      return rep;
    }
  }
  const int d = model.dim();
  const DensityField mu = invariant_density(model, grid);
  std::vector<DensityField> grad;
  for (int j = 0; j < d; ++j) grad.push_back(density_derivative(model, grid, MultiIndex::unit(d, j)));
  const double peak = mu.values.maxCoeff();
  std::vector<int> centre(d);
  for (int j = 0; j < d; ++j) centre[j] = grid.points()[j] / 2;
  auto grad_w = [&](long flat) {
    double s = 0;
    for (int j = 0; j < d; ++j) s += grad[j].values(flat) * grad[j].values(flat);
    return std::sqrt(s) / mu.values(flat);
  };
  for (int j = 0; j < d; ++j) {
    for (int dir : {-1, 1}) {
      std::vector<double> g;
      std::vector<int> idx = centre;
      for (int k = centre[j]; k >= 0 && k < grid.points()[j]; k += dir) {
        idx[j] = k;
        const long flat = grid.flatten(idx);
        if (mu.values(flat) <= 1e-9 * peak) break;
        g.push_back(grad_w(flat));
      }
      const std::size_t start = g.size() - g.size() / 4;
      bool monotone = g.size() / 4 >= 3;
      for (std::size_t k = start; monotone && k + 1 < g.size(); ++k)
        if (g[k + 1] < g[k]) monotone = false;
      if (!monotone) {
        rep.verdict = CompactnessVerdict::Inconclusive;
        rep.detail = "|grad W| not increasing on the outer ray segment of axis " + std::to_string(j);
        return rep;
      }
    }
  }
  rep.verdict = CompactnessVerdict::CompactSufficient;
  rep.detail = "polynomial moments finite and |grad W| increasing along every axis ray";
  return rep;
}

double estimate_t0(const OuModel& model, const GridSpec& grid, int N) {
  const int d = model.dim();
  const EigenSystem sys(model, N);
  DensityField f{grid, Eigen::VectorXd(grid.size()), "bump"};
  for (long k = 0; k < grid.size(); ++k) f.values(k) = std::exp(-0.5 * grid.node_at(k).squaredNorm());
  const auto idx = multi_indices_up_to(d, N);
  std::vector<double> coeff;
  std::vector<Poly> H;
  for (const auto& n : idx) {
    coeff.push_back(f.values.dot(sys.coeigen_density(n, grid).values) * grid.cell_volume());
    H.push_back(sys.H(n));
  }
  std::vector<long> interior;
  for (long k = 0; k < grid.size(); ++k) {
    const Eigen::VectorXd x = grid.node_at(k);
    bool inside = true;
    for (int j = 0; j < d; ++j) inside = inside && std::abs(x(j)) <= 0.25 * grid.halfwidth()[j];
    if (inside) interior.push_back(k);
  }
  std::vector<double> ts;
  for (double t = 0.05; t <= 20.0; t *= 1.25) ts.push_back(t);
  double best = std::numeric_limits<double>::infinity();
  for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
    const double t = *it;
    const DensityField ref = semigroup_apply_grid(model, t, f);
    double err = 0;
    for (long k : interior) {
      const Eigen::VectorXd x = grid.node_at(k);
      double s = 0;
      for (std::size_t i = 0; i < idx.size(); ++i) s += std::exp(-t * sys.eigenvalue(idx[i])) * coeff[i] * H[i](x);
      err = std::max(err, std::abs(s - ref.values(k)));
    }
    if (err > 1e-4) break;
    best = t;
  }
  return best;
}

SpectralReport spectral_report(const OuModel& model, double Theta, int degree_cap) {
  SpectralReport r;
  const auto& spec = model.spectral();
  r.diagonalizable = spec.diagonalizable;
  r.lattice = lattice(spec.rates, Theta);
  r.all_semisimple = true;
  for (const auto& lp : r.lattice) {
    const int bound = static_cast<int>(std::ceil(lp.theta / std::abs(spec.abscissa) - 1e-9)) + 1;
    if (bound > degree_cap) continue;
    MultiplicityRow row;
    row.theta = 0.0 - lp.theta;
    row.drift = multiplicities(model.B(), row.theta, bound);
    row.generator = row.drift;
    if (row.drift.algebraic != row.drift.geometric) r.all_semisimple = false;
    r.eigenvalues.push_back(row);
  }
  return r;
}

std::string spectral_report_json(const SpectralReport& r) {
  nlohmann::json j;
  j["lattice"] = nlohmann::json::array();
  for (const auto& lp : r.lattice) {
    nlohmann::json reps = nlohmann::json::array();
    for (const auto& n : lp.reps) reps.push_back(n.components());
    j["lattice"].push_back({{"theta", lp.theta}, {"multiplicity", lp.multiplicity}, {"reps", reps}});
  }
  j["eigenvalues"] = nlohmann::json::array();
  for (const auto& row : r.eigenvalues)
    j["eigenvalues"].push_back(
        {{"theta", row.theta}, {"Ma", row.drift.algebraic}, {"Mg", row.drift.geometric}, {"index", row.drift.index}});
  j["diagonalizable"] = r.diagonalizable;
  j["all_semisimple"] = r.all_semisimple;
  return dump_json(j);
}

}  // namespace levyou
