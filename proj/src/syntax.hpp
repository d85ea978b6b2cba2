#pragma once

// Tokenizer and recursive-descent helpers shared by the DDL and the
// relational manifest reader.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "tgm/text.hpp"
#include "tgm/types.hpp"
#include "tgm/value.hpp"

namespace tgm::syntax {

constexpr int kMaxDepth = 200;

enum class Tok { Ident, QIdent, String, Int, Decimal, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // decoded for strings and quoted labels
  SourceLocation loc;
};

struct SyntaxError {
  SourceLocation loc;
  std::string message;
  std::string expected;
};

inline std::string describe_token(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string " + quote_string(t.text);
    case Tok::QIdent: return "label " + quote_label(t.text);
    default: return "'" + t.text + "'";
  }
}

inline void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.loc = here();
      if (pos_ >= src_.size()) {
        out.push_back(std::move(t));
        return out;
      }
      const char c = src_[pos_];
      if (is_ident_start(c)) {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) t.text.push_back(advance());
      } else if (c == '`' || c == '"') {
        t.kind = c == '`' ? Tok::QIdent : Tok::String;
        t.text = quoted(c);
      } else if (is_digit(c) || (c == '-' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
        number(t);
      } else {
        t.kind = Tok::Punct;
        t.text = punct();
      }
      out.push_back(std::move(t));
    }
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  SourceLocation here() const { return {line_, col_}; }

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string quoted(char quote) {
    const SourceLocation start = here();
    advance();
    std::string out;
    for (;;) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw SyntaxError{start, quote == '"' ? "unterminated string" : "unterminated quoted label",
                          std::string(1, quote)};
      }
      const char c = advance();
      if (c == quote) return out;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= src_.size()) continue;
      const SourceLocation esc = here();
      const char e = advance();
      switch (e) {
        case 'n': out.push_back('\n'); break;
        case 't': out.push_back('\t'); break;
        case 'r': out.push_back('\r'); break;
        case '\\': out.push_back('\\'); break;
        case '"': out.push_back('"'); break;
        case '`': out.push_back('`'); break;
        case 'u': {
          if (pos_ >= src_.size() || src_[pos_] != '{') throw SyntaxError{esc, "malformed \\u escape", "{"};
          advance();
          std::uint32_t cp = 0;
          int digits = 0;
          while (pos_ < src_.size() && std::isxdigit(static_cast<unsigned char>(src_[pos_])) && digits < 6) {
            const char h = advance();
            cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(static_cast<unsigned char>(h))
                                                          ? h - '0'
                                                          : (std::tolower(static_cast<unsigned char>(h)) - 'a' + 10));
            ++digits;
          }
          if (digits == 0 || pos_ >= src_.size() || src_[pos_] != '}' || cp > 0x10FFFF) {
            throw SyntaxError{esc, "malformed \\u escape", "}"};
          }
          advance();
          append_utf8(out, cp);
          break;
        }
        default: throw SyntaxError{esc, std::string("unknown escape \\") + e, ""};
      }
    }
  }

  void number(Token& t) {
    t.kind = Tok::Int;
    if (src_[pos_] == '-') t.text.push_back(advance());
    while (pos_ < src_.size() && is_digit(src_[pos_])) t.text.push_back(advance());
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && is_digit(src_[pos_ + 1])) {
      t.kind = Tok::Decimal;
      t.text.push_back(advance());
      while (pos_ < src_.size() && is_digit(src_[pos_])) t.text.push_back(advance());
    }
  }

  std::string punct() {
    static const char* kTwo[] = {"..", "->", "<=", ">=", "!="};
    for (const char* p : kTwo) {
      if (src_.substr(pos_, 2) == p) {
        advance();
        advance();
        return p;
      }
    }
    const char c = src_[pos_];
    if (std::string_view("{}()[]<>=:;,|.*@").find(c) == std::string_view::npos) {
      const auto u = static_cast<unsigned char>(c);
      std::string shown = u >= 0x20 && u < 0x7F ? std::string(1, c) : "\\x" + std::to_string(u);
      throw SyntaxError{here(), "unexpected character '" + shown + "'", ""};
    }
    advance();
    return std::string(1, c);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

inline std::optional<Comparison> comparison_from(std::string_view s) {
  if (s == "<") return Comparison::Less;
  if (s == "<=") return Comparison::LessEq;
  if (s == "=") return Comparison::Equal;
  if (s == ">=") return Comparison::GreaterEq;
  if (s == ">") return Comparison::Greater;
  if (s == "!=") return Comparison::NotEqual;
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }
  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }

  [[noreturn]] void fail(const Token& at, std::string expected) const {
    throw SyntaxError{at.loc, "unexpected " + describe_token(at), std::move(expected)};
  }

  bool is_punct(std::string_view p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }
  bool is_keyword(std::string_view k) const { return peek().kind == Tok::Ident && peek().text == k; }

  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail(peek(), "'" + std::string(p) + "'");
  }
  void expect_keyword(std::string_view k) {
    if (!is_keyword(k)) fail(peek(), "'" + std::string(k) + "'");
    next();
  }
  bool at_end() const { return peek().kind == Tok::End; }

  std::string label(std::string_view what = "label") {
    const Token& t = peek();
    if (t.kind != Tok::Ident && t.kind != Tok::QIdent) fail(t, std::string(what));
    return next().text;
  }

  FieldPath path() {
    FieldPath p{label("field name")};
    while (accept(".")) p.push_back(label("field name"));
    return p;
  }

  std::uint32_t count() {
    const Token& t = peek();
    if (t.kind != Tok::Int || t.text.front() == '-') fail(t, "non-negative integer");
    std::uint32_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw SyntaxError{t.loc, "count out of range: " + t.text, ""};
    }
    next();
    return v;
  }

  Multiplicity multiplicity() {
    Multiplicity m;
    m.min = count();
    expect("..");
    if (!accept("*")) m.max = count();
    return m;
  }

  Value value(int depth = 0) {
    if (depth > kMaxDepth) throw SyntaxError{peek().loc, "value nested too deeply", ""};
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        std::int64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
          throw SyntaxError{t.loc, "integer out of range: " + t.text, ""};
        }
        next();
        return Value::integer(v);
      }
      case Tok::Decimal: {
        const auto d = Decimal::parse(t.text);
        if (!d) throw SyntaxError{t.loc, "decimal out of range or too precise: " + t.text, ""};
        next();
        return Value::decimal(*d);
      }
      case Tok::String: return Value::text(next().text);
      case Tok::Ident:
        if (t.text == "true" || t.text == "false") return Value::boolean(next().text == "true");
        fail(t, "value");
      case Tok::Punct:
        if (accept("{")) {
          std::vector<FieldValue> fields;
          if (!accept("}")) {
            do {
              std::string name = label("field name");
              expect(":");
              fields.push_back(FieldValue{std::move(name), value(depth + 1)});
            } while (accept(","));
            expect("}");
          }
          return Value::record(std::move(fields));
        }
        if (accept("[")) {
          std::vector<Value> items;
          if (!accept("]")) {
            do {
              items.push_back(value(depth + 1));
            } while (accept(","));
            expect("]");
          }
          return Value::list(std::move(items));
        }
        if (accept("@")) {
          std::string tag = label("alternative label");
          expect("(");
          Value inner = value(depth + 1);
          expect(")");
          return Value::tagged(std::move(tag), std::move(inner));
        }
        fail(t, "value");
      default: fail(t, "value");
    }
  }

 private:
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

}  // namespace tgm::syntax
