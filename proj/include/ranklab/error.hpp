#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ranklab {

enum class ErrorKind {
  InvalidArgument,
  NotAUnit,
  DimensionMismatch,
  ModulusMismatch,
  NotInvertible,
  BadLevel,
  OrderExceedsBound,
  GroupTooLarge,
  SearchBudgetExceeded,
  Unsupported,
  SpaceTooLarge,
  PresentationMismatch,
  NonScalarCommutator,
  ZeroElement,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotAUnit: return "NotAUnit";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ModulusMismatch: return "ModulusMismatch";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::BadLevel: return "BadLevel";
    case ErrorKind::OrderExceedsBound: return "OrderExceedsBound";
    case ErrorKind::GroupTooLarge: return "GroupTooLarge";
    case ErrorKind::SearchBudgetExceeded: return "SearchBudgetExceeded";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorKind::PresentationMismatch: return "PresentationMismatch";
    case ErrorKind::NonScalarCommutator: return "NonScalarCommutator";
    case ErrorKind::ZeroElement: return "ZeroElement";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// True for errors that mean "the request is outside what can be computed
/// here", as opposed to a failed check.
inline bool is_infeasible(ErrorKind kind) {
  return kind == ErrorKind::GroupTooLarge || kind == ErrorKind::SearchBudgetExceeded ||
         kind == ErrorKind::SpaceTooLarge || kind == ErrorKind::Unsupported;
}

}  // namespace ranklab
