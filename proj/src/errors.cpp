#include "scatlab/errors.hpp"

namespace scatlab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ChartUndefined: return "ChartUndefined";
    case ErrorKind::NotCharacteristic: return "NotCharacteristic";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SupportViolation: return "SupportViolation";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NoCounterpart: return "NoCounterpart";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace scatlab
