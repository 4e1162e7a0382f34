#include "phiq/error.hpp"

namespace phiq {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidPrime: return "InvalidPrime";
    case ErrorKind::LevelNotCoprime: return "LevelNotCoprime";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InternalInconsistency: return "InternalInconsistency";
    case ErrorKind::DivisibilityViolation: return "DivisibilityViolation";
    case ErrorKind::InvalidPermutation: return "InvalidPermutation";
    case ErrorKind::EmptySigma: return "EmptySigma";
    case ErrorKind::InfiniteQuotient: return "InfiniteQuotient";
    case ErrorKind::InfiniteOrder: return "InfiniteOrder";
    case ErrorKind::IncompatibleEndo: return "IncompatibleEndo";
    case ErrorKind::InvalidOperator: return "InvalidOperator";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

}  // namespace phiq
