#pragma once

#include <stdexcept>
#include <string>

namespace gp {

enum class ErrorCode {
  AntisymmetryViolation,
  JacobiViolation,
  DimensionMismatch,
  SingularKillingForm,
  NoMatrixBasis,
  BasisGramSingular,
  NonFiniteValue,
  UnresolvableFrameField,
  OffOrbit,
  WeylWallSingularity,
  UnsupportedAlgebra,
  NotAbelian,
  EmptyTrajectory,
  ConfigParseError,
  ExpressionParseError,
  InvalidArgument,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type used throughout the library. The code is what callers
/// (and the C API) dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace gp
