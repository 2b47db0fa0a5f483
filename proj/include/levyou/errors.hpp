#pragma once

#include <stdexcept>
#include <string>

namespace levyou {

enum class ErrorKind {
  UnstableDrift,
  HypoellipticityFailure,
  NonConvergedQuadrature,
  QuadratureFailure,
  DivergentMoment,
  GridTooCoarse,
  InterpolationOutOfRange,
  OrderingViolated,
  NotDiagonalizable,
  IncompleteTable,
  SingularPreMap,
  CutoffTooLarge,
  CutoffTooSmall,
  InvalidArgument,
  ConfigError,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace levyou
