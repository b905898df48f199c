#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nullseq {

enum class ErrorKind {
  invalid_input,
  type_mismatch,
  not_a_quotient_sequencing,
  infeasible_fixing,
  invalid_fixing,
  infeasible,
  too_large,
  budget_exceeded,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::type_mismatch: return "type-mismatch";
    case ErrorKind::not_a_quotient_sequencing: return "not-a-quotient-sequencing";
    case ErrorKind::infeasible_fixing: return "infeasible-fixing";
    case ErrorKind::invalid_fixing: return "invalid-fixing";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nullseq
