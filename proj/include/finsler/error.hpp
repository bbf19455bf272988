#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace finsler {

enum class ErrorKind {
  DomainEmpty,
  SingularMetric,
  NonSmoothLocus,
  ImmersionDegenerate,
  Config,
  LimitDivergent,
  FlagDegenerate,
  CriticalPoint,
  ConstructionPrecondition,
  Divergence,
  NotASolution,
  Spec,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DomainEmpty: return "domain-empty";
    case ErrorKind::SingularMetric: return "singular-metric";
    case ErrorKind::NonSmoothLocus: return "non-smooth-locus";
    case ErrorKind::ImmersionDegenerate: return "immersion-degenerate";
    case ErrorKind::Config: return "config";
    case ErrorKind::LimitDivergent: return "limit-divergent";
    case ErrorKind::FlagDegenerate: return "flag-degenerate";
    case ErrorKind::CriticalPoint: return "critical-point";
    case ErrorKind::ConstructionPrecondition: return "construction-precondition";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::NotASolution: return "not-a-solution";
    case ErrorKind::Spec: return "spec";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace finsler
