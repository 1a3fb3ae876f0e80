#pragma once

#include <stdexcept>
#include <string>

namespace lossy {

enum class ErrorKind {
  InvalidDimension,
  NotHermitian,
  NoConvergence,
  InvalidParameter,
  DegenerateFrame,
  UnsupportedDerivative,
  DegenerateParameter,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "InvalidDimension";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::UnsupportedDerivative: return "UnsupportedDerivative";
    case ErrorKind::DegenerateParameter: return "DegenerateParameter";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

  // Numeric-domain errors as opposed to caller mistakes.
  bool is_numeric() const noexcept {
    return kind_ == ErrorKind::DegenerateParameter || kind_ == ErrorKind::UnsupportedDerivative ||
           kind_ == ErrorKind::DegenerateFrame || kind_ == ErrorKind::NoConvergence;
  }

 private:
  ErrorKind kind_;
  std::string message_;
};

}  // namespace lossy
