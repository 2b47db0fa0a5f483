#pragma once

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>

#include "levyou/grid.hpp"
#include "levyou/model.hpp"
#include "levyou/poly.hpp"

namespace levyou {

// Serialises JSON with every floating-point number printed to 17 significant digits.
std::string dump_json(const nlohmann::json& j);

struct Config {
  std::string name;
  OuModel model;
  std::optional<GridSpec> grid;
  int degree_cap = 12;
  std::uint64_t seed = 20240601;
  std::string hash;  // FNV-1a of the canonical config text
};

// Strict parse: unknown keys, wrong types and assumption violations raise
// Error(ConfigError) with the offending field path in the message.
Config parse_config(const nlohmann::json& j);
Config load_config(const std::string& path);

nlohmann::json poly_to_json(const Poly& p);
Poly poly_from_json(const nlohmann::json& j);

std::string fnv1a_hex(const std::string& text);

}  // namespace levyou
