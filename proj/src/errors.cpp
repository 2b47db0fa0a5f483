#include "levyou/errors.hpp"

namespace levyou {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::UnstableDrift: return "UnstableDrift";
    case ErrorKind::HypoellipticityFailure: return "HypoellipticityFailure";
    case ErrorKind::NonConvergedQuadrature: return "NonConvergedQuadrature";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::DivergentMoment: return "DivergentMoment";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::InterpolationOutOfRange: return "InterpolationOutOfRange";
    case ErrorKind::OrderingViolated: return "OrderingViolated";
    case ErrorKind::NotDiagonalizable: return "NotDiagonalizable";
    case ErrorKind::IncompleteTable: return "IncompleteTable";
    case ErrorKind::SingularPreMap: return "SingularPreMap";
    case ErrorKind::CutoffTooLarge: return "CutoffTooLarge";
    case ErrorKind::CutoffTooSmall: return "CutoffTooSmall";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace levyou
