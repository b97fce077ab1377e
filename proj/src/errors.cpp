#include "graphheat/errors.hpp"

namespace graphheat {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::NonPositiveWeight: return "NonPositiveWeight";
    case Errc::NonPositiveMeasure: return "NonPositiveMeasure";
    case Errc::Disconnected: return "Disconnected";
    case Errc::DuplicateEdgeConflict: return "DuplicateEdgeConflict";
    case Errc::ParseError: return "ParseError";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::MonotonicityViolation: return "MonotonicityViolation";
    case Errc::IntegrationFailure: return "IntegrationFailure";
    case Errc::UnderflowWindow: return "UnderflowWindow";
    case Errc::ContractionViolated: return "ContractionViolated";
    case Errc::SolverFailure: return "SolverFailure";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::NoBoundInHorizon: return "NoBoundInHorizon";
    case Errc::WindowTooShort: return "WindowTooShort";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

namespace {
std::string decorate(Errc code, const std::string& what, std::optional<int> line) {
  std::string msg(to_string(code));
  if (line) msg += " at line " + std::to_string(*line);
  if (!what.empty()) msg += ": " + what;
  return msg;
}
}  // namespace

Error::Error(Errc code, const std::string& what, std::optional<int> line)
    : std::runtime_error(decorate(code, what, line)), code_(code), line_(line) {}

}  // namespace graphheat
