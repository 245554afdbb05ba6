#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sleec/syntax/ast.hpp"

namespace sleec::analysis {

/// Atom-level view of conditions for enumeration-based analyses.
///
/// Every distinct predicate instance is an independent boolean atom, except
/// that syntactically identical predicates share one atom and syntactic
/// negations of each other share one atom with opposite polarity (t > 20 and
/// t <= 20 map to the same atom). Derived predicate names stay opaque atoms;
/// they are not expanded into their definitions. This over-approximates
/// satisfiability for related numeric predicates — documented behavior, not
/// an SMT solver.
class AtomDomain {
 public:
  /// Canonical atom index and the polarity the predicate reads it with;
  /// registers the atom on first sight.
  std::pair<std::uint32_t, bool> resolve(const syntax::Predicate& p);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> names_;
};

/// A condition compiled to postfix over atom indices; evaluated against a
/// packed assignment (bit i of `words` = truth of atom i).
class AtomProgram {
 public:
  static AtomProgram compile(const syntax::Condition& c, AtomDomain& domain);

  bool eval(const std::uint64_t* words) const;

  /// Global atom indices this program reads.
  std::vector<std::uint32_t> atoms_used() const;

 private:
  struct Ins {
    enum class Op : std::uint8_t { Push, PushConst, Not, And, Or };
    Op op;
    std::uint32_t arg = 0;
    bool positive = true;
  };
  std::vector<Ins> code_;
};

/// One rule's clauses compiled over a shared atom domain, scope condition
/// folded into the base clause.
struct RuleAtomView {
  std::string rule_id;
  std::vector<AtomProgram> clauses;  // index 0 = base

  static RuleAtomView build(const syntax::Ruleset& rs, const syntax::Rule& rule,
                            AtomDomain& domain);

  /// Largest i with clauses 0..i all true; nullopt when the base is false.
  std::optional<int> active(const std::uint64_t* words) const;
};

}  // namespace sleec::analysis
