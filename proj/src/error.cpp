#include "wgd/error.hpp"

namespace wgd {

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::NonpositiveDensity: return "NonpositiveDensity";
    case ErrorKind::NoTaylorExpansion: return "NoTaylorExpansion";
    case ErrorKind::TruncationExceeded: return "TruncationExceeded";
    case ErrorKind::DivergenceSuspected: return "DivergenceSuspected";
    case ErrorKind::AlternatingSeriesNotConverged: return "AlternatingSeriesNotConverged";
    case ErrorKind::NoRoot: return "NoRoot";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace wgd
