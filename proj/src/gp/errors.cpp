#include "gp/errors.hpp"

namespace gp {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorCode::JacobiViolation: return "JacobiViolation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularKillingForm: return "SingularKillingForm";
    case ErrorCode::NoMatrixBasis: return "NoMatrixBasis";
    case ErrorCode::BasisGramSingular: return "BasisGramSingular";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::UnresolvableFrameField: return "UnresolvableFrameField";
    case ErrorCode::OffOrbit: return "OffOrbit";
    case ErrorCode::WeylWallSingularity: return "WeylWallSingularity";
    case ErrorCode::UnsupportedAlgebra: return "UnsupportedAlgebra";
    case ErrorCode::NotAbelian: return "NotAbelian";
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::ExpressionParseError: return "ExpressionParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace gp
