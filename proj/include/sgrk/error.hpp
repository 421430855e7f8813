#pragma once

#include <stdexcept>
#include <string>

namespace sgrk {

enum class ErrorKind {
  syntax,
  unknown_variable,
  invalid_argument,
  separation,
  deadlock,
  unsatisfiable_init,
  not_weak,
  budget_exceeded,
  limit_exceeded,
  illegal_input,
  controller_undefined,
  alphabet_mismatch,
  not_invertible,
  export_too_large,
  io,
  internal,
};

const char* to_string(ErrorKind kind);

// Single exception type for the library; the kind drives CLI exit codes and
// lets tests assert on the failure category without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sgrk
