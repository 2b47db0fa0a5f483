#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "levyou/grid.hpp"
#include "levyou/model.hpp"

namespace levyou {

enum class CheckStatus { Pass, Fail, Skip };
const char* to_string(CheckStatus s);

struct CheckResult {
  CheckStatus status = CheckStatus::Skip;
  std::string detail;
};

struct VerifyContext {
  const OuModel* model = nullptr;
  GridSpec grid;
  int degree_cap = 12;
  std::uint64_t seed = 20240601;
};

// One property-based invariant. Checks that do not apply to the model skip.
struct InvariantCheck {
  std::string module;
  std::string name;
  std::function<CheckResult(const VerifyContext&)> run;
};

const std::vector<InvariantCheck>& invariant_registry();

struct VerifyRow {
  const InvariantCheck* check = nullptr;
  CheckResult result;
  double seconds = 0;
};

struct VerifyReport {
  std::vector<VerifyRow> rows;
  bool all_passed() const;  // no Fail rows
};

VerifyReport run_verification(const VerifyContext& ctx);
std::string verify_table(const VerifyReport& r);
std::string verify_json(const VerifyReport& r);

}  // namespace levyou
