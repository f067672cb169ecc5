#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qpair {

enum class ErrorKind {
  NotSquare,
  NotHermitian,
  ShapeMismatch,
  NotPositive,
  TraceNotOne,
  EmptyKrausList,
  NotTracePreserving,
  DimMismatch,
  BadParam,
  InfeasibleShape,
  NotNormalized,
  WrongLabels,
  UnknownLabel,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::TraceNotOne: return "TraceNotOne";
    case ErrorKind::EmptyKrausList: return "EmptyKrausList";
    case ErrorKind::NotTracePreserving: return "NotTracePreserving";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::BadParam: return "BadParam";
    case ErrorKind::InfeasibleShape: return "InfeasibleShape";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::WrongLabels: return "WrongLabels";
    case ErrorKind::UnknownLabel: return "UnknownLabel";
  }
  return "Unknown";
}

/// Every precondition or invariant violation in the library is reported with
/// this exception; `kind()` identifies the violated contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace qpair
