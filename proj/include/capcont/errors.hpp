#pragma once

#include <stdexcept>
#include <string>

namespace capcont {

/// Error categories. The CLI maps each to a distinct diagnostic code.
enum class ErrorCode {
  kArgument,
  kDimension,
  kNumeric,
  kCpViolation,
  kTpViolation,
  kDomain,
  kUnknownChannel,
  kBadParameter,
  kMalformedJson,
  kIo,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& what) : Error(ErrorCode::kArgument, what) {}
};

struct DimensionError : Error {
  explicit DimensionError(const std::string& what) : Error(ErrorCode::kDimension, what) {}
};

struct NumericError : Error {
  explicit NumericError(const std::string& what) : Error(ErrorCode::kNumeric, what) {}
};

/// Raised for bounds that are only defined on a restricted domain, e.g. a
/// simulation bound evaluated at zero capacity.
struct DomainError : Error {
  explicit DomainError(const std::string& what) : Error(ErrorCode::kDomain, what) {}
};

/// Choi matrix is not positive semidefinite; carries the offending eigenvalue.
class CpViolation : public Error {
 public:
  explicit CpViolation(double min_eigenvalue);
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Kraus family or Choi matrix fails the trace-preservation condition.
class TpViolation : public Error {
 public:
  explicit TpViolation(double residual);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace capcont
