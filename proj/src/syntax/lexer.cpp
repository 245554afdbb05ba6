#include "sleec/syntax/token.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace sleec::syntax {

const char* token_kind_name(TokenKind kind) {
  switch (kind) {
    case TokenKind::KwScope: return "SCOPE";
    case TokenKind::KwRule: return "RULE";
    case TokenKind::KwIf: return "IF";
    case TokenKind::KwThen: return "THEN";
    case TokenKind::KwUnless: return "UNLESS";
    case TokenKind::KwIn: return "IN";
    case TokenKind::KwWhich: return "WHICH";
    case TokenKind::KwCase: return "CASE";
    case TokenKind::KwAnd: return "AND";
    case TokenKind::KwOr: return "OR";
    case TokenKind::KwNot: return "NOT";
    case TokenKind::KwAfter: return "AFTER";
    case TokenKind::KwWithin: return "WITHIN";
    case TokenKind::KwOtherwise: return "OTHERWISE";
    case TokenKind::KwMonitored: return "MONITORED";
    case TokenKind::KwCapability: return "CAPABILITY";
    case TokenKind::KwDerived: return "DERIVED";
    case TokenKind::KwInvariant: return "INVARIANT";
    case TokenKind::KwRange: return "RANGE";
    case TokenKind::KwEnum: return "ENUM";
    case TokenKind::KwBoolean: return "BOOLEAN";
    case TokenKind::KwInteger: return "INTEGER";
    case TokenKind::KwReal: return "REAL";
    case TokenKind::KwTrue: return "TRUE";
    case TokenKind::KwFalse: return "FALSE";
    case TokenKind::KwEnforced: return "ENFORCED";
    case TokenKind::Ident: return "identifier";
    case TokenKind::Int: return "integer";
    case TokenKind::Real: return "real";
    case TokenKind::String: return "string";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Colon: return "':'";
    case TokenKind::DotDot: return "'..'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Eq: return "'='";
    case TokenKind::Neq: return "'!='";
    case TokenKind::Lt: return "'<'";
    case TokenKind::Le: return "'<='";
    case TokenKind::Gt: return "'>'";
    case TokenKind::Ge: return "'>='";
    case TokenKind::EndOfFile: return "end of input";
  }
  return "?";
}

namespace {

const std::unordered_map<std::string, TokenKind>& keyword_table() {
  static const std::unordered_map<std::string, TokenKind> table{
      {"SCOPE", TokenKind::KwScope},       {"RULE", TokenKind::KwRule},
      {"IF", TokenKind::KwIf},             {"THEN", TokenKind::KwThen},
      {"UNLESS", TokenKind::KwUnless},     {"IN", TokenKind::KwIn},
      {"WHICH", TokenKind::KwWhich},       {"CASE", TokenKind::KwCase},
      {"AND", TokenKind::KwAnd},           {"OR", TokenKind::KwOr},
      {"NOT", TokenKind::KwNot},           {"AFTER", TokenKind::KwAfter},
      {"WITHIN", TokenKind::KwWithin},     {"OTHERWISE", TokenKind::KwOtherwise},
      {"MONITORED", TokenKind::KwMonitored},
      {"CAPABILITY", TokenKind::KwCapability},
      {"DERIVED", TokenKind::KwDerived},   {"INVARIANT", TokenKind::KwInvariant},
      {"RANGE", TokenKind::KwRange},       {"ENUM", TokenKind::KwEnum},
      {"BOOLEAN", TokenKind::KwBoolean},   {"INTEGER", TokenKind::KwInteger},
      {"REAL", TokenKind::KwReal},         {"TRUE", TokenKind::KwTrue},
      {"FALSE", TokenKind::KwFalse},       {"ENFORCED", TokenKind::KwEnforced},
  };
  return table;
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      SourcePos pos{line_, col_};
      if (at_end()) {
        out.push_back({TokenKind::EndOfFile, "", 0, 0.0, pos});
        return out;
      }
      const char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        out.push_back(identifier(pos));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        out.push_back(number(pos));
      } else if (c == '"') {
        out.push_back(string_literal(pos));
      } else {
        out.push_back(punct(pos));
      }
    }
  }

 private:
  bool at_end() const { return offset_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return offset_ + ahead < src_.size() ? src_[offset_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[offset_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    for (;;) {
      if (at_end()) return;
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token identifier(SourcePos pos) {
    std::string text;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
      text.push_back(advance());
    auto it = keyword_table().find(upper(text));
    if (it != keyword_table().end()) return {it->second, text, 0, 0.0, pos};
    return {TokenKind::Ident, text, 0, 0.0, pos};
  }

  Token number(SourcePos pos) {
    std::string text;
    bool is_real = false;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
    // '.' starts a fraction only when followed by a digit; "10..40" stays
    // integer '..' integer.
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_real = true;
      text.push_back(advance());
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
    }
    if (peek() == 'e' || peek() == 'E') {
      is_real = true;
      text.push_back(advance());
      if (peek() == '+' || peek() == '-') text.push_back(advance());
      if (!std::isdigit(static_cast<unsigned char>(peek())))
        throw LexError("malformed number '" + text + "'", pos);
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) text.push_back(advance());
    }
    if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_')
      throw LexError("malformed number '" + text + std::string(1, peek()) + "'", pos);
    if (is_real) {
      double value = 0.0;
      auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (ec != std::errc() || p != text.data() + text.size())
        throw LexError("malformed number '" + text + "'", pos);
      return {TokenKind::Real, text, 0, value, pos};
    }
    std::int64_t value = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || p != text.data() + text.size())
      throw LexError("integer literal out of range '" + text + "'", pos);
    return {TokenKind::Int, text, value, 0.0, pos};
  }

  Token string_literal(SourcePos pos) {
    advance();  // opening quote
    std::string text;
    for (;;) {
      if (at_end() || peek() == '\n') throw LexError("unterminated string literal", pos);
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (at_end()) throw LexError("unterminated string literal", pos);
        char esc = advance();
        switch (esc) {
          case '"': text.push_back('"'); break;
          case '\\': text.push_back('\\'); break;
          case 'n': text.push_back('\n'); break;
          case 't': text.push_back('\t'); break;
          default:
            throw LexError(std::string("unknown escape '\\") + esc + "'", pos);
        }
      } else {
        text.push_back(c);
      }
    }
    return {TokenKind::String, text, 0, 0.0, pos};
  }

  Token punct(SourcePos pos) {
    char c = advance();
    switch (c) {
      case '(': return {TokenKind::LParen, "(", 0, 0.0, pos};
      case ')': return {TokenKind::RParen, ")", 0, 0.0, pos};
      case '{': return {TokenKind::LBrace, "{", 0, 0.0, pos};
      case '}': return {TokenKind::RBrace, "}", 0, 0.0, pos};
      case ',': return {TokenKind::Comma, ",", 0, 0.0, pos};
      case ':': return {TokenKind::Colon, ":", 0, 0.0, pos};
      case '-': return {TokenKind::Minus, "-", 0, 0.0, pos};
      case '=': return {TokenKind::Eq, "=", 0, 0.0, pos};
      case '.':
        if (peek() == '.') {
          advance();
          return {TokenKind::DotDot, "..", 0, 0.0, pos};
        }
        throw LexError("unexpected character '.'", pos);
      case '!':
        if (peek() == '=') {
          advance();
          return {TokenKind::Neq, "!=", 0, 0.0, pos};
        }
        throw LexError("unexpected character '!'", pos);
      case '<':
        if (peek() == '=') {
          advance();
          return {TokenKind::Le, "<=", 0, 0.0, pos};
        }
        return {TokenKind::Lt, "<", 0, 0.0, pos};
      case '>':
        if (peek() == '=') {
          advance();
          return {TokenKind::Ge, ">=", 0, 0.0, pos};
        }
        return {TokenKind::Gt, ">", 0, 0.0, pos};
      default:
        throw LexError(std::string("illegal character '") + c + "'", pos);
    }
  }

  std::string_view src_;
  std::size_t offset_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace sleec::syntax
