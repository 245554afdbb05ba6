#include "sleec/diagnostics.hpp"

#include <sstream>

namespace sleec {

const char* severity_name(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Info: return "info";
  }
  return "error";
}

nlohmann::json Diagnostic::to_json() const {
  nlohmann::json j{
      {"severity", severity_name(severity)},
      {"code", code},
      {"message", message},
  };
  if (!rule.empty()) j["rule"] = rule;
  if (clause >= 0) j["clause"] = clause;
  if (!witness.empty()) j["witness"] = witness;
  if (witness_count > 0) j["witness_count"] = witness_count;
  return j;
}

std::string Diagnostic::to_string() const {
  std::ostringstream os;
  os << severity_name(severity) << ": " << code << ": " << message;
  if (!rule.empty()) {
    os << " [rule " << rule;
    if (clause >= 0) os << ", clause " << clause;
    os << "]";
  }
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.severity == Severity::Error) return true;
  return false;
}

namespace {
std::string join_messages(const std::vector<Diagnostic>& diags) {
  std::ostringstream os;
  bool first = true;
  for (const auto& d : diags) {
    if (d.severity != Severity::Error) continue;
    if (!first) os << "; ";
    os << d.code << ": " << d.message;
    first = false;
  }
  return first ? std::string("no errors") : os.str();
}
}  // namespace

SemanticError::SemanticError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_messages(diags)), diags_(std::move(diags)) {}

CompileError::CompileError(std::vector<Diagnostic> diags)
    : std::runtime_error(join_messages(diags)), diags_(std::move(diags)) {}

const char* step_error_code_name(StepErrorCode c) {
  switch (c) {
    case StepErrorCode::MissingBinding: return "MISSING_BINDING";
    case StepErrorCode::TypeMismatch: return "TYPE_MISMATCH";
    case StepErrorCode::ConflictingConstraints: return "CONFLICTING_CONSTRAINTS";
    case StepErrorCode::InvariantViolation: return "INVARIANT_VIOLATION";
  }
  return "STEP_ERROR";
}

StepError::StepError(StepErrorCode code, std::string message, nlohmann::json detail)
    : std::runtime_error(std::move(message)), code_(code), detail_(std::move(detail)) {}

}  // namespace sleec
