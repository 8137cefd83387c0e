#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fortify {

enum class ErrorKind {
  kInvalidArgument,
  kBudgetExceeded,
  kEmptySubgame,
  kNotProjection,
  kZeroDenominator,
  kNotLeftRegular,
  kNotBiregular,
  kNoConvergence,
  kDivisibilityError,
  kSizeMismatch,
  kEmptySet,
  kIsolatedVertex,
  kDimensionMismatch,
  kParameterInfeasible,
  kGadgetUnavailable,
  kParseError,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI, the Python bindings) can map them without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) throw Error(kind, what);
}

}  // namespace fortify
