#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halin {

enum class ErrorKind {
  DegreeTwoVertex,
  TooFewLeaves,
  MalformedTree,
  UnknownVertex,
  InvalidEdge,
  InvalidArgument,
  IncompleteColoring,
  NotCubic,
  BudgetExceeded,
  NoWitness,
  MethodInapplicable,
  Parse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegreeTwoVertex: return "DegreeTwoVertex";
    case ErrorKind::TooFewLeaves: return "TooFewLeaves";
    case ErrorKind::MalformedTree: return "MalformedTree";
    case ErrorKind::UnknownVertex: return "UnknownVertex";
    case ErrorKind::InvalidEdge: return "InvalidEdge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IncompleteColoring: return "IncompleteColoring";
    case ErrorKind::NotCubic: return "NotCubic";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NoWitness: return "NoWitness";
    case ErrorKind::MethodInapplicable: return "MethodInapplicable";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind; the
/// message always starts with the kind name so CLI diagnostics can be grepped.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace halin
