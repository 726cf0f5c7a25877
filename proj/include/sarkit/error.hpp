#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sarkit {

/// Broad failure classes. The CLI maps each to an exit code.
enum class ErrorKind {
  domain,     // argument outside a function's mathematical domain
  input,      // caller-supplied data violates a precondition
  parse,      // malformed file
  config,     // inconsistent parameters (denoiser strength, looks mismatch)
  numerical,  // non-finite result or solver failure
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace sarkit
