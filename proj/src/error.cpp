#include "sarkit/error.hpp"

namespace sarkit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::input: return "input";
    case ErrorKind::parse: return "parse";
    case ErrorKind::config: return "config";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

}  // namespace sarkit
