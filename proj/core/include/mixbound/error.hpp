#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mixbound {

enum class ErrorKind {
  shape,
  support_violation,
  degenerate_measure,
  eigenvalue_box,
  domain,
  insufficient_budget,
  size,
  unsupported_dimension,
  unsupported_kernel,
  no_known_rate,
  precondition,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool cond, ErrorKind kind, const char* what) {
  if (!cond) throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::shape: return "shape error";
    case ErrorKind::support_violation: return "support violation";
    case ErrorKind::degenerate_measure: return "degenerate measure";
    case ErrorKind::eigenvalue_box: return "eigenvalue box violation";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::insufficient_budget: return "insufficient budget";
    case ErrorKind::size: return "size error";
    case ErrorKind::unsupported_dimension: return "unsupported dimension";
    case ErrorKind::unsupported_kernel: return "unsupported kernel";
    case ErrorKind::no_known_rate: return "no known rate";
    case ErrorKind::precondition: return "precondition violated";
  }
  return "error";
}

}  // namespace mixbound
