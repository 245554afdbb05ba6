#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sleec/diagnostics.hpp"

namespace sleec::syntax {

enum class TokenKind {
  // keywords (case-insensitive in source)
  KwScope,
  KwRule,
  KwIf,
  KwThen,
  KwUnless,
  KwIn,
  KwWhich,
  KwCase,
  KwAnd,
  KwOr,
  KwNot,
  KwAfter,
  KwWithin,
  KwOtherwise,
  KwMonitored,
  KwCapability,
  KwDerived,
  KwInvariant,
  KwRange,
  KwEnum,
  KwBoolean,
  KwInteger,
  KwReal,
  KwTrue,
  KwFalse,
  KwEnforced,
  // literals
  Ident,
  Int,
  Real,
  String,
  // punctuation
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Colon,
  DotDot,
  Minus,
  Eq,
  Neq,
  Lt,
  Le,
  Gt,
  Ge,
  EndOfFile,
};

const char* token_kind_name(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::EndOfFile;
  std::string text;             // original spelling (identifiers, strings)
  std::int64_t int_value = 0;   // Int
  double real_value = 0.0;      // Real
  SourcePos pos;
};

/// Splits source text into tokens. Keywords are matched case-insensitively;
/// identifiers keep their spelling. Throws LexError with the position of the
/// first illegal character or malformed literal.
std::vector<Token> tokenize(std::string_view source);

}  // namespace sleec::syntax
