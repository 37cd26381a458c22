#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gapbench {

enum class ErrorKind {
  Parse,
  IncompleteParadigm,
  RegionMismatch,
  NotFound,
  AmbiguousRegion,
  CoverageGap,
  Domain,
  Format,
  Provider,
  InvalidInput,
  MissingScore,
  InsufficientData,
  DegenerateSample,
  NoValidItems,
  Io,
  Invariant,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Single exception type for the core. The kind drives C API status codes and
// CLI exit codes; the message names the offending item, sentence, or line.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, bool retryable = false)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        retryable_(retryable) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Only meaningful for provider failures.
  bool retryable() const noexcept { return retryable_; }

 private:
  ErrorKind kind_;
  bool retryable_;
};

}  // namespace gapbench
