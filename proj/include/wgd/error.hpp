#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgd {

enum class ErrorKind {
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  SingularMatrix,
  DomainError,
  ParameterOutOfRange,
  DivergentIntegral,
  NonpositiveDensity,
  NoTaylorExpansion,
  TruncationExceeded,
  DivergenceSuspected,
  AlternatingSeriesNotConverged,
  NoRoot,
  InvalidInput,
};

std::string_view error_name(ErrorKind kind);

// Every recoverable failure in the library is reported through this type.
// The kind is stable and is what the CLI prints in its error JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace wgd
