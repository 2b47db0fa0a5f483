#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "levyou/density.hpp"
#include "levyou/errors.hpp"
#include "levyou/io.hpp"
#include "levyou/levy.hpp"
#include "levyou/polyspec.hpp"
#include "levyou/simulate.hpp"
#include "levyou/spectrum.hpp"
#include "levyou/verify.hpp"

using namespace levyou;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out = "-";
  std::string format = "json";
  std::vector<int> n;
  std::vector<int> deriv;
  std::vector<double> x, y;
  double t = 1.0;
  int truncation = 20;
  long samples = 10000;
  double theta = 0;
};

void emit(const Options& o, const std::string& text) {
  if (o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + o.out);
  f << text;
}

void emit_sidecar(const Options& o, const std::string& suffix, const std::string& text) {
  if (o.out == "-") {
    std::cerr << text;
    return;
  }
  std::ofstream f(o.out + suffix, std::ios::binary);
  f << text;
}

Eigen::VectorXd point(const std::vector<double>& v, int dim, const char* flag) {
  if (v.empty()) return Eigen::VectorXd::Zero(dim);
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorKind::InvalidArgument, std::string(flag) + " needs " + std::to_string(dim) + " components");
  return Eigen::Map<const Eigen::VectorXd>(v.data(), dim);
}

MultiIndex index(const std::vector<int>& v, int dim, const char* flag) {
  if (static_cast<int>(v.size()) != dim)
    throw Error(ErrorKind::InvalidArgument, std::string(flag) + " needs " + std::to_string(dim) + " components");
  for (int c : v)
    if (c < 0) throw Error(ErrorKind::InvalidArgument, std::string(flag) + " components must be >= 0");
  return MultiIndex(v);
}

std::string field_text(const Options& o, const DensityField& f) {
  if (o.format == "json") return density_json(f) + "\n";
  std::ostringstream os;
  write_density_csv(os, f);
  return os.str();
}

GridSpec grid_of(const Config& c) { return c.grid ? *c.grid : default_grid(c.model); }

int cmd_spectrum(const Config& c, const Options& o) {
  const double theta = o.theta > 0 ? o.theta : 3.0 * c.model.spectral().rates.maxCoeff();
  const SpectralReport r = spectral_report(c.model, theta, c.degree_cap);
  if (o.format == "json") {
    emit(o, spectral_report_json(r) + "\n");
  } else {
    std::ostringstream os;
    os << "theta,multiplicity,algebraic,geometric,index\n";
    for (std::size_t i = 0; i < r.lattice.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", r.lattice[i].theta);
      os << buf << ',' << r.lattice[i].multiplicity;
      if (i < r.eigenvalues.size()) {
        const auto& m = r.eigenvalues[i].drift;
        os << ',' << m.algebraic << ',' << m.geometric << ',' << m.index;
      } else {
        os << ",,,";
      }
      os << '\n';
    }
    emit(o, os.str());
  }
  return kExitOk;
}

int cmd_eigen(const Config& c, const Options& o) {
  const MultiIndex n = index(o.n, c.model.dim(), "--n");
  const EigenSystem sys(c.model, n.order());
  const GridSpec g = grid_of(c);
  const DensityField G = sys.coeigen_density(n, g);
  if (o.format == "csv") {
    emit(o, field_text(o, G));
    json meta{{"n", n.components()},
              {"eigenvalue", -sys.eigenvalue(n)},
              {"H", poly_to_json(sys.H(n))},
              {"c", sys.coeigen_constant(n)}};
    emit_sidecar(o, ".json", dump_json(meta) + "\n");
  } else {
    json j{{"n", n.components()},
           {"eigenvalue", -sys.eigenvalue(n)},
           {"H", poly_to_json(sys.H(n))},
           {"c", sys.coeigen_constant(n)},
           {"G_mu", json::parse(density_json(G))}};
    emit(o, dump_json(j) + "\n");
  }
  return kExitOk;
}

int cmd_density(const Config& c, const Options& o) {
  const GridSpec g = grid_of(c);
  const DensityField f = o.deriv.empty() ? invariant_density(c.model, g)
                                         : density_derivative(c.model, g, index(o.deriv, c.model.dim(), "--deriv"));
  emit(o, field_text(o, f));
  return kExitOk;
}

int cmd_transition(const Config& c, const Options& o) {
  const DensityField f = transition_density(c.model, o.t, point(o.x, c.model.dim(), "--x"), grid_of(c));
  emit(o, field_text(o, f));
  return kExitOk;
}

int cmd_mehler(const Config& c, const Options& o) {
  const int d = c.model.dim();
  const MehlerValue v = mehler_kernel(c.model, o.t, point(o.x, d, "--x"), point(o.y, d, "--y"), o.truncation);
  if (o.format == "json") {
    emit(o, dump_json({{"t", o.t}, {"N", o.truncation}, {"series", v.series}, {"closed_form", v.closed_form}}) + "\n");
  } else {
    char buf[96];
    std::snprintf(buf, sizeof buf, "series,closed_form\n%.17g,%.17g\n", v.series, v.closed_form);
    emit(o, buf);
  }
  return kExitOk;
}

int cmd_simulate(const Config& c, const Options& o) {
  SampleOptions opts;
  opts.seed = c.seed;
  const Eigen::MatrixXd s = sample_transition(c.model, o.t, point(o.x, c.model.dim(), "--x"), o.samples, opts);
  const std::string meta = sample_metadata_json(c.seed, o.samples, o.t, c.hash);
  if (o.format == "csv") {
    std::ostringstream os;
    write_samples_csv(os, s);
    emit(o, os.str());
    emit_sidecar(o, ".meta.json", meta + "\n");
  } else {
    json rows = json::array();
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < s.cols(); ++j) row.push_back(s(i, j));
      rows.push_back(std::move(row));
    }
    emit(o, dump_json({{"metadata", json::parse(meta)}, {"samples", rows}}) + "\n");
  }
  return kExitOk;
}

int cmd_verify(const Config& c, const Options& o) {
  const VerifyContext ctx{&c.model, grid_of(c), c.degree_cap, c.seed};
  const VerifyReport r = run_verification(ctx);
  if (o.format == "json") {
    emit(o, verify_json(r) + "\n");
    if (o.out != "-") std::cout << verify_table(r);
  } else {
    std::ostringstream os;
    os << "status,module,name,detail\n";
    for (const auto& row : r.rows)
      os << to_string(row.result.status) << ',' << row.check->module << ",\"" << row.check->name << "\",\""
         << row.result.detail << "\"\n";
    emit(o, os.str());
    if (o.out != "-") std::cout << verify_table(r);
  }
  return r.all_passed() ? kExitOk : kExitFailure;
}

int cmd_diagnose(const Config& c, const Options& o) {
  const OuModel& m = c.model;
  const std::vector<double> kappas{0.5, 1.0, 2.0};
  const MeasureDiagnostics md = measure_diagnostics(m.pi(), 4, kappas);
  const CompactnessReport comp = compactness_diagnostic(m, grid_of(c));
  json poly = json::object(), expo = json::object();
  for (const auto& [k, ok] : md.poly_moment) poly[std::to_string(k)] = ok;
  for (const auto& [k, ok] : md.exp_moment) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", k);
    expo[buf] = ok;
  }
  json j{{"name", c.name},
         {"kalman_rank", {{"satisfied", true}, {"kalman_index", m.kalman()}}},
         {"stable_drift", {{"satisfied", true}, {"spectral_abscissa", m.abscissa()}}},
         {"log_moment", md.log_moment},
         {"polynomial_moments", poly},
         {"exponential_moments", expo},
         {"diagonalizable", m.spectral().diagonalizable},
         {"compactness", {{"verdict", to_string(comp.verdict)}, {"detail", comp.detail}}}};
  if (o.format == "json") {
    emit(o, dump_json(j) + "\n");
  } else {
    std::ostringstream os;
    os << "key,value\n";
    os << "kalman_index," << m.kalman() << "\n";
    os << "log_moment," << (md.log_moment ? "true" : "false") << "\n";
    for (const auto& [k, ok] : md.poly_moment) os << "polynomial_moment_" << k << ',' << (ok ? "true" : "false") << "\n";
    os << "compactness," << to_string(comp.verdict) << "\n";
    emit(o, os.str());
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy-driven Ornstein-Uhlenbeck semigroups: spectra, densities and checks"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "model configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output path, '-' for stdout");
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    return sub;
  };

  auto* spectrum = common(app.add_subcommand("spectrum", "eigenvalue lattice and multiplicities"));
  spectrum->add_option("--theta", o.theta, "lattice cutoff (default 3 max rate)");
  auto* eigen = common(app.add_subcommand("eigen", "eigenfunction H_n, co-eigenfunction G_n mu and c_n"));
  eigen->add_option("--n", o.n, "multi-index, comma separated")->required()->delimiter(',');
  auto* density = common(app.add_subcommand("density", "invariant density or one of its derivatives"));
  density->add_option("--deriv", o.deriv, "derivative multi-index, comma separated")->delimiter(',');
  auto* transition = common(app.add_subcommand("transition", "transition density on the grid"));
  transition->add_option("--t", o.t, "time")->required();
  transition->add_option("--x", o.x, "start point, comma separated")->delimiter(',');
  auto* mehler = common(app.add_subcommand("mehler", "truncated Mehler series against its closed form"));
  mehler->add_option("--t", o.t, "time")->required();
  mehler->add_option("--x", o.x, "first point")->delimiter(',');
  mehler->add_option("--y", o.y, "second point")->delimiter(',');
  mehler->add_option("--N", o.truncation, "truncation degree");
  auto* simulate = common(app.add_subcommand("simulate", "Monte Carlo samples of X_t"));
  simulate->add_option("--t", o.t, "time")->required();
  simulate->add_option("--x", o.x, "start point")->delimiter(',');
  simulate->add_option("--N", o.samples, "sample count")->check(CLI::PositiveNumber);
  auto* verify = common(app.add_subcommand("verify", "run the invariant suite"));
  auto* diagnose = common(app.add_subcommand("diagnose", "assumption, moment and compactness report"));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    const Config c = load_config(o.config);
    if (spectrum->parsed()) return cmd_spectrum(c, o);
    if (eigen->parsed()) return cmd_eigen(c, o);
    if (density->parsed()) return cmd_density(c, o);
    if (transition->parsed()) return cmd_transition(c, o);
    if (mehler->parsed()) return cmd_mehler(c, o);
    if (simulate->parsed()) return cmd_simulate(c, o);
    if (verify->parsed()) return cmd_verify(c, o);
    if (diagnose->parsed()) return cmd_diagnose(c, o);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? kExitConfig : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
