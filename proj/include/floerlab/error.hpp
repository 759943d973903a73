#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace floerlab {

enum class ErrorCode {
  InvalidInput,
  NotSpd,
  NotSymmetric,
  NotAntisymmetric,
  NoConvergence,
  SingularIterate,
  SingularShift,
  SingularMatrix,
  Degenerate,
  OutOfDomain,
  SchemaError,
  OddDimension,
  NondegeneracyProbeFailed,
  BadCutoff,
  SingularHessian,
  IntegrationBlowup,
  HypothesisFailed,
  DegenerateEndpoint,
  AmbiguousCrossing,
  LevelMismatch,
  NonDecayingC,
  SingularSample,
  HeronFailure,
};

std::string_view to_string(ErrorCode code);

/// Every library failure carries one of the codes above; callers that need to
/// branch (the CLI exit-code contract, tests) inspect code() rather than the text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace floerlab
