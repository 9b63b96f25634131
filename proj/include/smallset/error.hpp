#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace smallset {

enum class ErrorKind {
  InvalidInput,
  OverlappingDomains,
  DomainTooSmall,
  BlockTooLarge,
  InvalidGrouping,
  NotARefinement,
  NotContained,
  ImproperTarget,
  MalformedCover,
  TruncationExceeded,
  TooLarge,
  Inconclusive,
  WindowTooSmall,
  CannotRegroup,
  HittingFailure,
  NotFound,
  DenseTarget,
  InternalInconsistency,
};

constexpr std::string_view kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::OverlappingDomains: return "OverlappingDomains";
    case ErrorKind::DomainTooSmall: return "DomainTooSmall";
    case ErrorKind::BlockTooLarge: return "BlockTooLarge";
    case ErrorKind::InvalidGrouping: return "InvalidGrouping";
    case ErrorKind::NotARefinement: return "NotARefinement";
    case ErrorKind::NotContained: return "NotContained";
    case ErrorKind::ImproperTarget: return "ImproperTarget";
    case ErrorKind::MalformedCover: return "MalformedCover";
    case ErrorKind::TruncationExceeded: return "TruncationExceeded";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Inconclusive: return "Inconclusive";
    case ErrorKind::WindowTooSmall: return "WindowTooSmall";
    case ErrorKind::CannotRegroup: return "CannotRegroup";
    case ErrorKind::HittingFailure: return "HittingFailure";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::DenseTarget: return "DenseTarget";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
  }
  return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can report the violated precondition by name.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace smallset
