#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sigmak {

enum class ErrorKind {
  domain,
  admissibility,
  degenerate_quotient,
  argument,
  metric,
  dimension,
  chart,
  numerical,
  model,
  safeguard,
  precondition,
  hypothesis,
  normalization,
  umbilicity,
  validation,
  io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace sigmak
