#include "htc/error.hpp"

namespace htc {

std::string_view category_name(ErrorCategory c) noexcept {
  switch (c) {
    case ErrorCategory::invalid_argument: return "invalid_argument";
    case ErrorCategory::degenerate: return "degenerate";
    case ErrorCategory::io: return "io";
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::convergence: return "convergence";
  }
  return "unknown";
}

}  // namespace htc
