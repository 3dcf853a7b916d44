// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace evcs {

/// Base of every error raised by the library. `kind()` is a short stable tag
/// used by the CLI for machine-parsable diagnostics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

#define EVCS_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                 \
   public:                                                    \
    using Error::Error;                                       \
    const char* kind() const noexcept override { return tag; } \
  }

EVCS_DEFINE_ERROR(FeasibilityError, "feasibility");
EVCS_DEFINE_ERROR(DimensionError, "dimension");
EVCS_DEFINE_ERROR(DomainError, "domain");
EVCS_DEFINE_ERROR(ConfigError, "config");
EVCS_DEFINE_ERROR(ModeError, "mode");
EVCS_DEFINE_ERROR(CalibrationError, "calibration");
EVCS_DEFINE_ERROR(ValidationError, "validation");
EVCS_DEFINE_ERROR(SearchRefusedError, "search-refused");
EVCS_DEFINE_ERROR(SignConventionError, "sign-convention");
EVCS_DEFINE_ERROR(PreconditionError, "precondition");

#undef EVCS_DEFINE_ERROR

/// Malformed input file. Carries the 1-based line number when known (0 otherwise).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  const char* kind() const noexcept override { return "parse"; }
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace evcs
