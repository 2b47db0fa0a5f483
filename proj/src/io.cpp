#include "levyou/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "levyou/errors.hpp"

namespace levyou {

using nlohmann::json;

namespace {

void dump_into(std::string& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_into(out, it.value());
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(out, j[i]);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
      } else {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
      }
      break;
    }
    default:
      out += j.dump();
  }
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::ConfigError, path + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) fail(path + "." + it.key(), "unknown key");
}

const json& field(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  return j.at(key);
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Eigen::VectorXd vector(const json& j, const std::string& path, int dim) {
  if (!j.is_array()) fail(path, "expected an array");
  if (static_cast<int>(j.size()) != dim) fail(path, "expected " + std::to_string(dim) + " entries");
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd matrix(const json& j, const std::string& path, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) fail(path, "expected " + std::to_string(dim) + " rows");
  Eigen::MatrixXd m(dim, dim);
  for (int i = 0; i < dim; ++i) m.row(i) = vector(j[i], path + "[" + std::to_string(i) + "]", dim).transpose();
  return m;
}

GridSpec grid_spec(const json& j, const std::string& path, int dim) {
  check_keys(j, path, {"L", "N"});
  const Eigen::VectorXd L = vector(field(j, path, "L"), path + ".L", dim);
  const json& N = field(j, path, "N");
  if (!N.is_array() || static_cast<int>(N.size()) != dim) fail(path + ".N", "expected " + std::to_string(dim) + " entries");
  std::vector<int> n(dim);
  for (int i = 0; i < dim; ++i) n[i] = integer(N[i], path + ".N[" + std::to_string(i) + "]");
  try {
    return GridSpec(std::vector<double>(L.data(), L.data() + dim), n);
  } catch (const Error& e) {
    fail(path, e.what());
  }
}

LevyMeasure levy_measure(const json& j, const std::string& path, int dim) {
  if (!j.is_object()) fail(path, "expected an object");
  const json& type = field(j, path, "type");
  if (!type.is_string()) fail(path + ".type", "expected a string");
  const std::string t = type.get<std::string>();
  try {
    if (t == "null") {
      check_keys(j, path, {"type"});
      return LevyMeasure::null(dim);
    }
    if (t == "finite_atomic") {
      check_keys(j, path, {"type", "atoms"});
      const json& atoms = field(j, path, "atoms");
      if (!atoms.is_array()) fail(path + ".atoms", "expected an array");
      FiniteAtomic fa;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string p = path + ".atoms[" + std::to_string(i) + "]";
        check_keys(atoms[i], p, {"location", "weight"});
        fa.atoms.push_back({vector(field(atoms[i], p, "location"), p + ".location", dim),
                            number(field(atoms[i], p, "weight"), p + ".weight")});
      }
      return LevyMeasure(dim, fa);
    }
    if (t == "compound_poisson") {
      check_keys(j, path, {"type", "rate", "grid", "values", "uniform"});
      CompoundPoissonDensity cp;
      cp.rate = number(field(j, path, "rate"), path + ".rate");
      const GridSpec g = grid_spec(field(j, path, "grid"), path + ".grid", dim);
      Eigen::VectorXd values(g.size());
      if (j.contains("values") == j.contains("uniform")) fail(path, "give exactly one of 'values' or 'uniform'");
      if (j.contains("values")) {
        const json& v = j.at("values");
        if (!v.is_array() || static_cast<long>(v.size()) != g.size()) fail(path + ".values", "size must match grid");
        for (long k = 0; k < g.size(); ++k) values(k) = number(v[k], path + ".values[" + std::to_string(k) + "]");
      } else {
        const json& u = j.at("uniform");
        check_keys(u, path + ".uniform", {"lo", "hi"});
        const Eigen::VectorXd lo = vector(field(u, path + ".uniform", "lo"), path + ".uniform.lo", dim);
        const Eigen::VectorXd hi = vector(field(u, path + ".uniform", "hi"), path + ".uniform.hi", dim);
        for (long k = 0; k < g.size(); ++k) {
          const Eigen::VectorXd x = g.node_at(k);
          values(k) = ((x.array() >= lo.array()) && (x.array() < hi.array())).all() ? 1.0 : 0.0;
        }
        const double mass = values.sum() * g.cell_volume();
        if (mass <= 0) fail(path + ".uniform", "box contains no grid nodes");
        values /= mass;
      }
      cp.jump_density = DensityField{g, values, "jump density"};
      return LevyMeasure(dim, cp);
    }
    if (t == "alpha_stable") {
      check_keys(j, path, {"type", "alpha", "atoms"});
      AlphaStable st;
      st.alpha = number(field(j, path, "alpha"), path + ".alpha");
      const json& atoms = field(j, path, "atoms");
      if (!atoms.is_array()) fail(path + ".atoms", "expected an array");
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        const std::string p = path + ".atoms[" + std::to_string(i) + "]";
        check_keys(atoms[i], p, {"direction", "weight"});
        st.atoms.push_back({vector(field(atoms[i], p, "direction"), p + ".direction", dim),
                            number(field(atoms[i], p, "weight"), p + ".weight")});
      }
      return LevyMeasure(dim, st);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    fail(path, e.what());
  }
  fail(path + ".type", "unknown Levy measure type '" + t + "'");
}

}  // namespace

std::string dump_json(const json& j) {
  std::string out;
  dump_into(out, j);
  return out;
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Config parse_config(const json& j) {
  const std::string root = "config";
  check_keys(j, root, {"name", "dim", "Q", "B", "levy", "grid", "degree_cap", "seed"});
  const int dim = integer(field(j, root, "dim"), "config.dim");
  if (dim < 1 || dim > 16) fail("config.dim", "must lie in [1, 16]");
  Eigen::MatrixXd Q = matrix(field(j, root, "Q"), "config.Q", dim);
  Eigen::MatrixXd B = matrix(field(j, root, "B"), "config.B", dim);
  LevyMeasure pi = j.contains("levy") ? levy_measure(j.at("levy"), "config.levy", dim) : LevyMeasure::null(dim);

  std::optional<OuModel> model;
  try {
    model.emplace(Q, B, pi);
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::HypoellipticityFailure:
        fail("config.Q", std::string("Kalman rank condition violated: ") + e.what());
      case ErrorKind::UnstableDrift:
        fail("config.B", std::string("drift not stable, s(B) < 0 required: ") + e.what());
      default:
        fail(root, e.what());
    }
  }
  Config cfg{"", std::move(*model), std::nullopt, 12, 20240601, fnv1a_hex(dump_json(j))};
  if (j.contains("name")) {
    if (!j.at("name").is_string()) fail("config.name", "expected a string");
    cfg.name = j.at("name").get<std::string>();
  }
  if (j.contains("grid")) cfg.grid = grid_spec(j.at("grid"), "config.grid", dim);
  if (j.contains("degree_cap")) {
    cfg.degree_cap = integer(j.at("degree_cap"), "config.degree_cap");
    if (cfg.degree_cap < 0 || cfg.degree_cap > 12) fail("config.degree_cap", "must lie in [0, 12]");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) fail("config.seed", "expected a non-negative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, path + ": cannot open file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ConfigError, path + ": " + e.what());
  }
  return parse_config(j);
}

json poly_to_json(const Poly& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back({{"index", m.components()}, {"coeff", c}});
  return {{"dim", p.dim()}, {"terms", terms}};
}

Poly poly_from_json(const json& j) {
  Poly p(j.at("dim").get<int>());
  for (const auto& t : j.at("terms")) p.add_term(MultiIndex(t.at("index").get<std::vector<int>>()), t.at("coeff").get<double>());
  return p;
}

}  // namespace levyou
