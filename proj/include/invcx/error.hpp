#pragma once

#include <stdexcept>
#include <string>

namespace invcx {

enum class ErrorCode {
  JacobiViolation,
  AntisymmetryViolation,
  NonPositiveMetric,
  NotASubalgebra,
  DependentGenerators,
  BidegreeOutOfRange,
  NegativeCutoff,
  UnknownLevel,
  TruncationMismatch,
  ShapeMismatch,
  ArityMismatch,
  AllZero,
  NotAComplex,
  NotInKernel,
  InsufficientData,
  NoFailureCertificate,
  DegreeOutOfRange,
  InvalidModule,
  ConfigError,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit codes and machine-readable error records.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace invcx
