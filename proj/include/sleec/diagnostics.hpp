#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sleec {

struct SourcePos {
  int line = 0;
  int col = 0;
  bool operator==(const SourcePos&) const = default;
};

enum class Severity { Error, Warning, Info };

const char* severity_name(Severity s);

/// One finding produced by a validation or analysis pass. `rule` and
/// `clause` locate the finding when it concerns a specific clause
/// (clause 0 is the base clause, i >= 1 the i-th hedge; -1 = whole rule
/// or not rule-related).
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  std::string rule;
  int clause = -1;
  /// Witness atom assignment for analyses that find one.
  std::map<std::string, bool> witness;
  /// How many assignments exhibited the problem (0 = not applicable).
  std::uint64_t witness_count = 0;

  nlohmann::json to_json() const;
  std::string to_string() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// Lexical error: illegal character or malformed literal.
class LexError : public std::runtime_error {
 public:
  LexError(std::string message, SourcePos pos)
      : std::runtime_error(std::move(message)), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Grammar violation with the position of the offending token.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string message, SourcePos pos)
      : std::runtime_error(std::move(message)), pos_(pos) {}
  SourcePos pos() const { return pos_; }

 private:
  SourcePos pos_;
};

/// Name-resolution or typing failure; carries the full diagnostic list.
class SemanticError : public std::runtime_error {
 public:
  explicit SemanticError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

/// Ruleset rejected by the compiler (well-formedness errors).
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(std::vector<Diagnostic> diags);
  const std::vector<Diagnostic>& diagnostics() const { return diags_; }

 private:
  std::vector<Diagnostic> diags_;
};

enum class StepErrorCode {
  MissingBinding,
  TypeMismatch,
  ConflictingConstraints,
  InvariantViolation,
};

const char* step_error_code_name(StepErrorCode c);

/// Failure of a single evaluation step (engine or oracle).
class StepError : public std::runtime_error {
 public:
  StepError(StepErrorCode code, std::string message, nlohmann::json detail = {});
  StepErrorCode code() const { return code_; }
  const nlohmann::json& detail() const { return detail_; }

 private:
  StepErrorCode code_;
  nlohmann::json detail_;
};

/// Analysis could not run as requested (e.g. exhaustive bound exceeded,
/// missing numeric range for random draws).
class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(std::string code, std::string message)
      : std::runtime_error(std::move(message)), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

}  // namespace sleec
