#pragma once

#include <stdexcept>
#include <string>

namespace scatlab {

enum class ErrorKind {
  ChartUndefined,
  NotCharacteristic,
  NoConvergence,
  SupportViolation,
  WindowTooSmall,
  DimensionMismatch,
  NoCounterpart,
  ConfigInvalid,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so
/// callers (and tests) can branch on the cause without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace scatlab
