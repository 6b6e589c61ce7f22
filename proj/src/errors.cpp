#include "capcont/errors.hpp"

#include <sstream>

namespace capcont {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kArgument: return "argument";
    case ErrorCode::kDimension: return "dimension";
    case ErrorCode::kNumeric: return "numeric";
    case ErrorCode::kCpViolation: return "cp-violation";
    case ErrorCode::kTpViolation: return "tp-violation";
    case ErrorCode::kDomain: return "domain";
    case ErrorCode::kUnknownChannel: return "unknown-channel";
    case ErrorCode::kBadParameter: return "bad-parameter";
    case ErrorCode::kMalformedJson: return "malformed-json";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {
std::string describe(const char* prefix, double v) {
  std::ostringstream os;
  os.precision(17);
  os << prefix << v;
  return os.str();
}
}  // namespace

CpViolation::CpViolation(double min_eigenvalue)
    : Error(ErrorCode::kCpViolation, describe("map is not completely positive; Choi eigenvalue ", min_eigenvalue)),
      min_eigenvalue_(min_eigenvalue) {}

TpViolation::TpViolation(double residual)
    : Error(ErrorCode::kTpViolation, describe("map is not trace preserving; residual ", residual)),
      residual_(residual) {}

}  // namespace capcont
