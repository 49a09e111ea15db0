#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace acs {

// Raised for lexical and syntactic errors, with 1-based position info.
struct SyntaxError : std::runtime_error {
  int line, col;
  SyntaxError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

enum class Tok {
  End,
  Ident,
  IntLit,
  FloatLit,
  StringLit,
  DocComment,  // /** ... */ text, delimiters included
  // punctuation / operators
  LParen, RParen, LBrace, RBrace, LBracket, RBracket,
  Comma, Colon, Semi, Dot,
  Assign,      // =
  Arrow,       // ->
  Plus, Minus, Star, Slash, Percent,
  Eq, NotEq, Lt, Le, Gt, Ge,
  AndAnd, OrOr, Not,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;       // identifier / literal spelling / doc text
  std::int64_t int_val = 0;
  double float_val = 0.0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool end = t.kind == Tok::End;
      out.push_back(std::move(t));
      if (end) break;
    }
    return out;
  }

 private:
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  char peek(size_t off = 0) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  bool at_end() const { return pos_ >= src_.size(); }

  Token make(Tok k, int line, int col, std::string text = {}) {
    Token t;
    t.kind = k;
    t.text = std::move(text);
    t.line = line;
    t.col = col;
    return t;
  }

  Token next() {
    skip_trivia();
    int line = line_, col = col_;
    if (at_end()) return make(Tok::End, line, col);

    // doc comment: preserved; the parser attaches it to the next `fn`
    if (peek() == '/' && peek(1) == '*' && peek(2) == '*') {
      std::string text;
      while (!at_end()) {
        if (peek() == '*' && peek(1) == '/') {
          text += advance();
          text += advance();
          return make(Tok::DocComment, line, col, std::move(text));
        }
        text += advance();
      }
      throw SyntaxError("unterminated doc comment", line, col);
    }

    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
      return ident(line, col);
    if (std::isdigit(static_cast<unsigned char>(c))) return number(line, col);
    if (c == '"') return string_lit(line, col);

    advance();
    switch (c) {
      case '(': return make(Tok::LParen, line, col);
      case ')': return make(Tok::RParen, line, col);
      case '{': return make(Tok::LBrace, line, col);
      case '}': return make(Tok::RBrace, line, col);
      case '[': return make(Tok::LBracket, line, col);
      case ']': return make(Tok::RBracket, line, col);
      case ',': return make(Tok::Comma, line, col);
      case ':': return make(Tok::Colon, line, col);
      case ';': return make(Tok::Semi, line, col);
      case '.': return make(Tok::Dot, line, col);
      case '+': return make(Tok::Plus, line, col);
      case '-':
        if (peek() == '>') { advance(); return make(Tok::Arrow, line, col); }
        return make(Tok::Minus, line, col);
      case '*': return make(Tok::Star, line, col);
      case '/': return make(Tok::Slash, line, col);
      case '%': return make(Tok::Percent, line, col);
      case '=':
        if (peek() == '=') { advance(); return make(Tok::Eq, line, col); }
        return make(Tok::Assign, line, col);
      case '!':
        if (peek() == '=') { advance(); return make(Tok::NotEq, line, col); }
        return make(Tok::Not, line, col);
      case '<':
        if (peek() == '=') { advance(); return make(Tok::Le, line, col); }
        return make(Tok::Lt, line, col);
      case '>':
        if (peek() == '=') { advance(); return make(Tok::Ge, line, col); }
        return make(Tok::Gt, line, col);
      case '&':
        if (peek() == '&') { advance(); return make(Tok::AndAnd, line, col); }
        throw SyntaxError("stray '&'", line, col);
      case '|':
        if (peek() == '|') { advance(); return make(Tok::OrOr, line, col); }
        throw SyntaxError("stray '|'", line, col);
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", line,
                      col);
  }

  void skip_trivia() {
    for (;;) {
      while (!at_end() &&
             std::isspace(static_cast<unsigned char>(peek())))
        advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      // plain block comment; /** is a doc comment and not trivia
      if (peek() == '/' && peek(1) == '*' && peek(2) != '*') {
        int line = line_, col = col_;
        advance();
        advance();
        for (;;) {
          if (at_end()) throw SyntaxError("unterminated comment", line, col);
          if (peek() == '*' && peek(1) == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
        continue;
      }
      break;
    }
  }

  Token ident(int line, int col) {
    std::string s;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                         peek() == '_'))
      s += advance();
    return make(Tok::Ident, line, col, std::move(s));
  }

  Token number(int line, int col) {
    std::string s;
    bool is_float = false;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
      s += advance();
    if (peek() == '.' &&
        std::isdigit(static_cast<unsigned char>(peek(1)))) {
      is_float = true;
      s += advance();
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
        s += advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      char sign = peek(1);
      size_t digit_at = (sign == '+' || sign == '-') ? 2 : 1;
      if (std::isdigit(static_cast<unsigned char>(peek(digit_at)))) {
        is_float = true;
        s += advance();  // e
        if (sign == '+' || sign == '-') s += advance();
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek())))
          s += advance();
      }
    }
    Token t = make(is_float ? Tok::FloatLit : Tok::IntLit, line, col, s);
    if (is_float) {
      auto [p, ec] =
          std::from_chars(s.data(), s.data() + s.size(), t.float_val);
      if (ec != std::errc{} || p != s.data() + s.size())
        throw SyntaxError("bad float literal '" + s + "'", line, col);
    } else {
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), t.int_val);
      if (ec != std::errc{} || p != s.data() + s.size())
        throw SyntaxError("integer literal out of range '" + s + "'", line,
                          col);
    }
    return t;
  }

  Token string_lit(int line, int col) {
    advance();  // opening quote
    std::string s;
    for (;;) {
      if (at_end()) throw SyntaxError("unterminated string", line, col);
      char c = advance();
      if (c == '"') break;
      if (c == '\n') throw SyntaxError("newline in string", line, col);
      if (c == '\\') {
        if (at_end()) throw SyntaxError("unterminated string", line, col);
        char e = advance();
        switch (e) {
          case 'n': s += '\n'; break;
          case 't': s += '\t'; break;
          case '\\': s += '\\'; break;
          case '"': s += '"'; break;
          default:
            throw SyntaxError(std::string("unknown escape '\\") + e + "'",
                              line, col);
        }
      } else {
        s += c;
      }
    }
    return make(Tok::StringLit, line, col, std::move(s));
  }
};

}  // namespace acs
