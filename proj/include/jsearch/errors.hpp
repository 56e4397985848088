#ifndef JSEARCH_ERRORS_HPP
#define JSEARCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jsearch {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Full-space construction requested above the configured dimension cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Eigensolver non-convergence or a degenerate spectrum where a gap is required.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameter combination for which no formula is provided (e.g. closed forms
/// of the critical coupling outside k = 3, 4, 5).
class UnsupportedError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Peak search bracket does not contain an interior maximum.
class BracketError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace jsearch

#endif  // JSEARCH_ERRORS_HPP
