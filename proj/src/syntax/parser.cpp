#include "sleec/syntax/parser.hpp"

#include <cctype>
#include <initializer_list>
#include <limits>
#include <sstream>

#include "sleec/analysis/analysis.hpp"
#include "sleec/syntax/token.hpp"

namespace sleec::syntax {

namespace {

std::string upper(const std::string& s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Parser {
 public:
  explicit Parser(std::string_view source) : tokens_(tokenize(source)) {}

  Ruleset run() {
    Ruleset rs;
    for (;;) {
      const Token& t = cur();
      switch (t.kind) {
        case TokenKind::EndOfFile:
          return rs;
        case TokenKind::KwMonitored:
          parse_monitored(rs.vocabulary);
          break;
        case TokenKind::KwCapability:
          parse_capabilities(rs.vocabulary);
          break;
        case TokenKind::KwDerived:
          parse_derived(rs.vocabulary);
          break;
        case TokenKind::KwInvariant:
          parse_invariant(rs);
          break;
        case TokenKind::KwScope:
          // "SCOPE name = expr" defines a scope; "SCOPE name RULE ..."
          // prefixes the following rule.
          if (peek(1).kind == TokenKind::Ident && peek(2).kind == TokenKind::Eq) {
            parse_scope_def(rs.vocabulary);
          } else {
            rs.rules.push_back(parse_rule());
          }
          break;
        case TokenKind::KwRule:
          rs.rules.push_back(parse_rule());
          break;
        default:
          fail({"MONITORED", "CAPABILITY", "DERIVED", "SCOPE", "INVARIANT", "RULE"});
      }
    }
  }

 private:
  const Token& cur() const { return tokens_[index_]; }
  const Token& peek(std::size_t ahead) const {
    std::size_t i = index_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& take() { return tokens_[index_++]; }

  bool accept(TokenKind kind) {
    if (cur().kind != kind) return false;
    ++index_;
    return true;
  }

  const Token& expect(TokenKind kind, const char* what = nullptr) {
    if (cur().kind != kind) fail({what ? what : token_kind_name(kind)});
    return take();
  }

  [[noreturn]] void fail(std::initializer_list<const char*> expected) const {
    std::ostringstream os;
    os << "expected ";
    bool first = true;
    for (const char* e : expected) {
      if (!first) os << " or ";
      os << e;
      first = false;
    }
    os << ", found ";
    if (cur().kind == TokenKind::Ident)
      os << "'" << cur().text << "'";
    else
      os << token_kind_name(cur().kind);
    throw SyntaxError(os.str(), cur().pos);
  }

  std::string expect_ident(const char* what) {
    if (cur().kind != TokenKind::Ident) fail({what});
    return take().text;
  }

  // ---- vocabulary ----

  void parse_monitored(VocabularyDecl& vocab) {
    SourcePos pos = take().pos;  // MONITORED
    MonitoredVar var;
    var.pos = pos;
    var.name = expect_ident("variable name");
    expect(TokenKind::Colon);
    switch (cur().kind) {
      case TokenKind::KwBoolean:
        take();
        var.kind = ValueKind::Boolean;
        break;
      case TokenKind::KwInteger: {
        take();
        var.kind = ValueKind::Integer;
        if (accept(TokenKind::KwRange)) {
          var.int_min = parse_int_bound();
          expect(TokenKind::DotDot);
          var.int_max = parse_int_bound();
          if (*var.int_min > *var.int_max)
            throw SyntaxError("empty integer range", pos);
        }
        break;
      }
      case TokenKind::KwReal: {
        take();
        var.kind = ValueKind::Real;
        if (accept(TokenKind::KwRange)) {
          var.real_min = parse_real_bound();
          expect(TokenKind::DotDot);
          var.real_max = parse_real_bound();
          if (*var.real_min > *var.real_max)
            throw SyntaxError("empty real range", pos);
        }
        break;
      }
      case TokenKind::KwEnum: {
        take();
        var.kind = ValueKind::Enum;
        expect(TokenKind::LBrace);
        var.enum_members.push_back(expect_ident("enum member"));
        while (accept(TokenKind::Comma)) var.enum_members.push_back(expect_ident("enum member"));
        expect(TokenKind::RBrace);
        break;
      }
      default:
        fail({"BOOLEAN", "INTEGER", "REAL", "ENUM"});
    }
    vocab.monitored.push_back(std::move(var));
  }

  std::int64_t parse_int_bound() {
    bool neg = accept(TokenKind::Minus);
    const Token& t = expect(TokenKind::Int, "integer");
    return neg ? -t.int_value : t.int_value;
  }

  double parse_real_bound() {
    bool neg = accept(TokenKind::Minus);
    double v;
    if (cur().kind == TokenKind::Int)
      v = static_cast<double>(take().int_value);
    else if (cur().kind == TokenKind::Real)
      v = take().real_value;
    else
      fail({"number"});
    return neg ? -v : v;
  }

  void parse_capabilities(VocabularyDecl& vocab) {
    take();  // CAPABILITY
    vocab.capabilities.push_back({expect_ident("capability name"), cur().pos});
    while (accept(TokenKind::Comma))
      vocab.capabilities.push_back({expect_ident("capability name"), cur().pos});
  }

  void parse_derived(VocabularyDecl& vocab) {
    SourcePos pos = take().pos;  // DERIVED
    DerivedDef def;
    def.pos = pos;
    def.name = expect_ident("derived predicate name");
    expect(TokenKind::Eq);
    def.condition = parse_condition();
    vocab.derived.push_back(std::move(def));
  }

  void parse_scope_def(VocabularyDecl& vocab) {
    SourcePos pos = take().pos;  // SCOPE
    ScopeDef def;
    def.pos = pos;
    def.name = expect_ident("scope name");
    expect(TokenKind::Eq);
    def.condition = parse_condition();
    vocab.scopes.push_back(std::move(def));
  }

  void parse_invariant(Ruleset& rs) {
    SourcePos pos = take().pos;  // INVARIANT
    ObligationInvariant inv;
    inv.pos = pos;
    inv.name = expect_ident("invariant name");
    inv.condition = parse_condition();
    rs.invariants.push_back(std::move(inv));
  }

  // ---- rules ----

  Rule parse_rule() {
    Rule rule;
    if (cur().kind == TokenKind::KwScope) {
      take();
      rule.scope = expect_ident("scope name");
    }
    rule.pos = cur().pos;
    expect(TokenKind::KwRule);
    rule.id = expect_ident("rule identifier");
    expect(TokenKind::KwIf);
    rule.base_condition = parse_condition();
    expect(TokenKind::KwThen);
    rule.base_obligation = parse_obligation();
    while (cur().kind == TokenKind::KwUnless) {
      take();
      HedgeClause hedge;
      hedge.condition = parse_condition();
      expect(TokenKind::KwIn);
      expect(TokenKind::KwWhich);
      expect(TokenKind::KwCase);
      hedge.obligation = parse_obligation();
      rule.hedges.push_back(std::move(hedge));
    }
    return rule;
  }

  // OR binds loosest, then AND, then NOT.
  Condition parse_condition() {
    if (++depth_ > kMaxNesting) throw SyntaxError("expression nested too deeply", cur().pos);
    std::vector<Condition> parts;
    parts.push_back(parse_and_chain());
    while (accept(TokenKind::KwOr)) parts.push_back(parse_and_chain());
    --depth_;
    return Condition::make_or(std::move(parts));
  }

  Condition parse_and_chain() {
    std::vector<Condition> parts;
    parts.push_back(parse_unary());
    while (accept(TokenKind::KwAnd)) parts.push_back(parse_unary());
    return Condition::make_and(std::move(parts));
  }

  Condition parse_unary() {
    if (++depth_ > kMaxNesting) throw SyntaxError("expression nested too deeply", cur().pos);
    Condition out;
    if (accept(TokenKind::KwNot)) {
      out = Condition::make_not(parse_unary());
    } else if (accept(TokenKind::LParen)) {
      out = parse_condition();
      expect(TokenKind::RParen);
    } else {
      out = Condition::make_atom(parse_predicate());
    }
    --depth_;
    return out;
  }

  Predicate parse_predicate() {
    switch (cur().kind) {
      case TokenKind::KwTrue:
        take();
        return Predicate::constant(true);
      case TokenKind::KwFalse:
        take();
        return Predicate::constant(false);
      case TokenKind::KwEnforced: {
        take();
        expect(TokenKind::LParen);
        std::string cap = expect_ident("capability name");
        expect(TokenKind::RParen);
        return Predicate::enforced(std::move(cap));
      }
      case TokenKind::Ident: {
        std::string name = take().text;
        RelOp op;
        switch (cur().kind) {
          case TokenKind::Eq: op = RelOp::Eq; break;
          case TokenKind::Neq: op = RelOp::Ne; break;
          case TokenKind::Lt: op = RelOp::Lt; break;
          case TokenKind::Le: op = RelOp::Le; break;
          case TokenKind::Gt: op = RelOp::Gt; break;
          case TokenKind::Ge: op = RelOp::Ge; break;
          default:
            return Predicate::bool_ref(std::move(name));
        }
        take();
        return Predicate::compare(std::move(name), op, parse_literal());
      }
      default:
        fail({"condition"});
    }
  }

  Literal parse_literal() {
    bool neg = accept(TokenKind::Minus);
    switch (cur().kind) {
      case TokenKind::Int: {
        std::int64_t v = take().int_value;
        return Literal::integer(neg ? -v : v);
      }
      case TokenKind::Real: {
        double v = take().real_value;
        return Literal::real(neg ? -v : v);
      }
      case TokenKind::Ident: {
        if (neg) fail({"number"});
        return Literal::enumerant(take().text);
      }
      default:
        fail({"literal"});
    }
  }

  Obligation parse_obligation() {
    Obligation out;
    out.atoms.push_back(parse_obligation_atom());
    while (accept(TokenKind::KwAnd)) out.atoms.push_back(parse_obligation_atom());
    return out;
  }

  ObligationAtom parse_obligation_atom() {
    ObligationAtom atom;
    atom.capability = expect_ident("capability name");
    if (accept(TokenKind::KwAfter)) {
      atom.modifier = ObligationAtom::Modifier::After;
      atom.duration = parse_duration();
    } else if (accept(TokenKind::KwWithin)) {
      atom.modifier = ObligationAtom::Modifier::Within;
      atom.duration = parse_duration();
      expect(TokenKind::KwOtherwise);
      atom.fallback = expect_ident("fallback capability");
    }
    return atom;
  }

  TimeDuration parse_duration() {
    SourcePos pos = cur().pos;
    const Token& amount = expect(TokenKind::Int, "duration amount");
    if (amount.int_value <= 0) throw SyntaxError("duration amount must be positive", pos);
    if (cur().kind != TokenKind::Ident)
      fail({"time unit (NANOSEC, MILLISEC, SEC, MINUTE, HOUR)"});
    const Token& unit_tok = take();
    const std::string u = upper(unit_tok.text);
    TimeUnit unit;
    if (u == "NANOSEC") unit = TimeUnit::Nanosec;
    else if (u == "MILLISEC") unit = TimeUnit::Millisec;
    else if (u == "SEC") unit = TimeUnit::Sec;
    else if (u == "MINUTE") unit = TimeUnit::Minute;
    else if (u == "HOUR") unit = TimeUnit::Hour;
    else
      throw SyntaxError("expected time unit (NANOSEC, MILLISEC, SEC, MINUTE, HOUR), found '" +
                            unit_tok.text + "'",
                        unit_tok.pos);
    if (amount.int_value > std::numeric_limits<std::int64_t>::max() / time_unit_nanos(unit))
      throw SyntaxError("duration overflows the nanosecond scale", pos);
    return {amount.int_value, unit};
  }

  static constexpr int kMaxNesting = 200;

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  int depth_ = 0;
};

}  // namespace

Ruleset parse_ruleset_unchecked(std::string_view source) { return Parser(source).run(); }

Ruleset parse_ruleset(std::string_view source) {
  Ruleset rs = parse_ruleset_unchecked(source);
  auto diags = analysis::check_well_formed(rs);
  if (has_errors(diags)) throw SemanticError(std::move(diags));
  return rs;
}

}  // namespace sleec::syntax
