#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linrel {

/// Failure categories raised by the library. Every throw site uses one of
/// these so callers (and the CLI exit-code mapping) can dispatch on kind.
enum class ErrorKind {
  DimensionMismatch,
  NotHermitian,
  NotPSD,
  Unsolvable,
  NotSelfAdjoint,
  NotNonnegative,
  NotSymmetric,
  OrderViolated,
  InvarianceViolated,
  ComponentMismatch,
  ConditionViolated,
  InternalInconsistency,
  SpecInvalid,
  InvalidTolerance,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::Unsolvable: return "Unsolvable";
    case ErrorKind::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorKind::NotNonnegative: return "NotNonnegative";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::OrderViolated: return "OrderViolated";
    case ErrorKind::InvarianceViolated: return "InvarianceViolated";
    case ErrorKind::ComponentMismatch: return "ComponentMismatch";
    case ErrorKind::ConditionViolated: return "ConditionViolated";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::SpecInvalid: return "SpecInvalid";
    case ErrorKind::InvalidTolerance: return "InvalidTolerance";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace linrel
