#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sleec/engine/obligation.hpp"
#include "sleec/engine/value.hpp"
#include "sleec/syntax/ast.hpp"

namespace sleec::engine {

/// Executable form of a ruleset. Compilation resolves every name to an
/// index, inlines derived predicates, and folds each rule's scope condition
/// into its base condition; conditions become flat postfix programs run over
/// a slot vector bound once per step.
///
/// A machine is immutable after compile() and safe to share across threads;
/// step() is reentrant and keeps no state between calls — every step starts
/// from reset outputs.
class RuleMachine {
 public:
  std::size_t rule_count() const { return rules_.size(); }
  const std::string& rule_id(std::size_t rule_index) const { return rules_[rule_index].id; }
  std::size_t clause_count(std::size_t rule_index) const {
    return rules_[rule_index].clauses.size();
  }

  /// Index of the clause whose obligation the rule demands under `snap`:
  /// the largest i with C0..Ci all true (scope folded into C0), or nullopt
  /// when the effective trigger C0 is false.
  std::optional<int> active_clause_index(std::size_t rule_index, const ConditionSnapshot& snap,
                                         SnapshotMode mode = SnapshotMode::Strict) const;

  /// One enforcement step: reset outputs, evaluate all rules (order
  /// independent), merge identical directives, check obligation invariants.
  ObligationSet step(const ConditionSnapshot& snap,
                     SnapshotMode mode = SnapshotMode::Strict) const;

 private:
  friend RuleMachine compile(const syntax::Ruleset& rs);
  friend class Compiler;

  enum class OpCode : std::uint8_t { PushPred, PushConst, PushCap, Not, And, Or };
  struct Instr {
    OpCode op;
    std::uint32_t arg = 0;
  };
  using Program = std::vector<Instr>;

  struct Pred {
    enum class Kind : std::uint8_t { BoolVar, CmpInt, CmpReal, CmpEnum } kind;
    std::uint32_t slot = 0;
    syntax::RelOp op = syntax::RelOp::Eq;
    std::int64_t int_rhs = 0;
    double real_rhs = 0.0;
    std::uint32_t enum_rhs = 0;
  };

  struct Atom {
    std::uint32_t capability;
    Modifier modifier;
  };

  struct Clause {
    Program condition;
    std::vector<Atom> atoms;  // noop elided at compile time
  };

  struct CompiledRule {
    std::string id;
    std::vector<Clause> clauses;  // clause 0 = base (scope folded in)
  };

  struct Slot {
    std::string name;
    syntax::ValueKind kind;
    std::unordered_map<std::string, std::uint32_t> enum_index;
  };

  struct Bound {
    bool present = false;
    bool b = false;
    std::int64_t i = 0;
    double r = 0.0;
    std::uint32_t e = 0;
  };

  struct Invariant {
    std::string name;
    Program condition;  // over PushCap leaves
  };

  std::vector<Bound> bind(const ConditionSnapshot& snap, SnapshotMode mode) const;
  bool eval(const Program& prog, const std::vector<Bound>& bound,
            const std::vector<bool>& enforced) const;
  int active_index(const CompiledRule& rule, const std::vector<Bound>& bound) const;

  std::vector<Slot> slots_;
  std::unordered_map<std::string, std::uint32_t> slot_index_;
  std::vector<std::string> capabilities_;
  std::unordered_map<std::string, std::uint32_t> capability_index_;
  std::vector<Pred> preds_;
  std::vector<CompiledRule> rules_;
  std::vector<Invariant> invariants_;
};

/// Compiles a ruleset, throwing CompileError with the well-formedness
/// diagnostics when the ruleset has errors.
RuleMachine compile(const syntax::Ruleset& rs);

}  // namespace sleec::engine
