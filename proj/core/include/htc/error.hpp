#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace htc {

// Coarse failure classes. The CLI prints the category name as the first
// token of its single-line error report.
enum class ErrorCategory {
  invalid_argument,
  degenerate,
  io,
  parse,
  convergence,
};

std::string_view category_name(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& what) {
  throw Error(c, what);
}

}  // namespace htc
