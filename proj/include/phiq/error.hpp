#pragma once

#include <stdexcept>
#include <string>

namespace phiq {

enum class ErrorKind {
  InvalidPrime,
  LevelNotCoprime,
  OutOfRange,
  InternalInconsistency,
  DivisibilityViolation,
  InvalidPermutation,
  EmptySigma,
  InfiniteQuotient,
  InfiniteOrder,
  IncompatibleEndo,
  InvalidOperator,
  ParseError,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by user input rather than by a broken invariant.
  bool is_input_error() const noexcept {
    switch (kind_) {
      case ErrorKind::InvalidPrime:
      case ErrorKind::LevelNotCoprime:
      case ErrorKind::OutOfRange:
      case ErrorKind::InvalidPermutation:
      case ErrorKind::InvalidOperator:
      case ErrorKind::ParseError:
        return true;
      default:
        return false;
    }
  }

 private:
  ErrorKind kind_;
};

}  // namespace phiq
