#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace graphheat {

enum class Errc {
  InvalidParameter,
  SelfLoop,
  NonPositiveWeight,
  NonPositiveMeasure,
  Disconnected,
  DuplicateEdgeConflict,
  ParseError,
  DimensionMismatch,
  NoConvergence,
  MonotonicityViolation,
  IntegrationFailure,
  UnderflowWindow,
  ContractionViolated,
  SolverFailure,
  GridMismatch,
  NoBoundInHorizon,
  WindowTooShort,
  ConfigError,
};

std::string_view to_string(Errc code);

/// Every failure in the library is reported as an Error carrying a code.
/// Parse failures also carry the 1-based line number of the offending record.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<int> line = std::nullopt);

  Errc code() const noexcept { return code_; }
  std::optional<int> line() const noexcept { return line_; }

 private:
  Errc code_;
  std::optional<int> line_;
};

}  // namespace graphheat
