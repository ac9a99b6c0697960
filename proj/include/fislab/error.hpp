#pragma once

#include <stdexcept>
#include <string>

namespace fislab {

enum class ErrorKind {
  invalid_argument,
  parse,
  io,
  domain,
  class_exhaustion,
  internal,
};

/// Library-wide exception. `kind()` drives the C API status mapping and lets
/// the degradation harness tell a termination signal (class_exhaustion) from a
/// real failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fislab
