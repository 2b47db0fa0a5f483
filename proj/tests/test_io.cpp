#include <gtest/gtest.h>

#include <string>

#include "levyou/errors.hpp"
#include "levyou/io.hpp"
#include "oracles.hpp"

using namespace levyou;
using nlohmann::json;

namespace {

json base_config() {
  return json::parse(R"({"name": "t", "dim": 1, "Q": [[1.0]], "B": [[-1.0]], "levy": {"type": "null"}})");
}

std::string config_error(const json& j) {
  try {
    parse_config(j);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigError);
    return e.what();
  }
  ADD_FAILURE() << "expected ConfigError";
  return {};
}

}  // namespace

TEST(Config, FixturesParse) {
  for (const char* name : {"kinetic_fp", "cp1d", "stable1d", "gauss1d"}) {
    const Config c = load_config(oracle::fixture(name));
    EXPECT_EQ(c.name, name);
    EXPECT_EQ(c.degree_cap, 6);
    EXPECT_EQ(c.seed, 20240601u);
    EXPECT_EQ(c.hash.size(), 16u);
  }
  EXPECT_EQ(load_config(oracle::fixture("kinetic_fp")).model.dim(), 2);
  EXPECT_TRUE(load_config(oracle::fixture("stable1d")).model.pi().is_stable());
}

TEST(Config, UnknownKeyNamesPath) {
  json j = base_config();
  j["levy"]["bogus"] = 1;
  EXPECT_NE(config_error(j).find("config.levy.bogus"), std::string::npos);
  json k = base_config();
  k["extra"] = true;
  EXPECT_NE(config_error(k).find("config.extra"), std::string::npos);
}

TEST(Config, MissingDriftIsConfigError) {
  json j = base_config();
  j.erase("B");
  EXPECT_NE(config_error(j).find("config.B"), std::string::npos);
}

TEST(Config, AssumptionViolationsAreExplained) {
  json unstable = base_config();
  unstable["B"] = json::parse("[[0.5]]");
  EXPECT_NE(config_error(unstable).find("s(B) < 0"), std::string::npos);
  json degenerate = json::parse(R"({"dim": 2, "Q": [[1,0],[0,0]], "B": [[-1,0],[0,-1]]})");
  EXPECT_NE(config_error(degenerate).find("Kalman"), std::string::npos);
}

TEST(Config, WrongTypes) {
  json j = base_config();
  j["dim"] = "one";
  EXPECT_NE(config_error(j).find("config.dim"), std::string::npos);
  json g = base_config();
  g["grid"] = json::parse(R"({"L": [4.0], "N": [100]})");
  EXPECT_NE(config_error(g).find("config.grid"), std::string::npos);
}

TEST(Config, HashIgnoresKeyOrder) {
  const json a = json::parse(R"({"dim": 1, "Q": [[1.0]], "B": [[-1.0]]})");
  const json b = json::parse(R"({"B": [[-1.0]], "Q": [[1.0]], "dim": 1})");
  EXPECT_EQ(parse_config(a).hash, parse_config(b).hash);
}

TEST(PolyJson, RoundTrip) {
  Poly p(2);
  p.add_term(MultiIndex{2, 1}, 1.0 / 3);
  p.add_term(MultiIndex{0, 0}, -4.5);
  const Poly q = poly_from_json(poly_to_json(p));
  EXPECT_EQ(q.dim(), 2);
  EXPECT_EQ(max_coeff_diff(p, q), 0.0);
}

TEST(DumpJson, SeventeenDigits) {
  EXPECT_EQ(dump_json(json{{"x", 0.1}}), "{\"x\":0.10000000000000001}");
  EXPECT_EQ(dump_json(json::array({1, 2.5, "s"})), "[1,2.5,\"s\"]");
}

TEST(Fnv1a, ReferenceVectors) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
  EXPECT_EQ(fnv1a_hex("foobar"), "85944171f73967e8");
}
