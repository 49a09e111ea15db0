#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "acs/ast.hpp"
#include "acs/lexer.hpp"

namespace acs {

// Recursive-descent parser for MiniLang. Produces a Program with NodeIds
// already assigned (pre-order, deterministic). Type information is filled
// in later by check_program().
class Parser {
 public:
  Parser(std::string_view src, std::string source_name)
      : toks_(Lexer(src).run()), source_name_(std::move(source_name)) {}

  Program parse() {
    Program p;
    p.source_name = source_name_;
    while (!at(Tok::End)) {
      std::optional<DocComment> doc;
      if (at(Tok::DocComment)) {
        doc = DocComment{split_lines(cur().text)};
        bump();
      }
      if (at_kw("record")) {
        if (doc) err("doc comments may only precede functions");
        p.records.push_back(record_decl());
      } else if (at_kw("fn")) {
        FunctionDecl f = fn_decl();
        f.doc = std::move(doc);
        p.functions.push_back(std::move(f));
      } else if (at_kw("test")) {
        if (doc) err("doc comments may only precede functions");
        p.tests.push_back(test_decl());
      } else {
        err("expected 'record', 'fn' or 'test'");
      }
    }
    assign_node_ids(p);
    return p;
  }

 private:
  std::vector<Token> toks_;
  size_t i_ = 0;
  std::string source_name_;
  bool in_test_ = false;

  const Token& cur() const { return toks_[i_]; }
  const Token& ahead(size_t n = 1) const {
    size_t j = i_ + n;
    return j < toks_.size() ? toks_[j] : toks_.back();
  }
  void bump() {
    if (i_ + 1 < toks_.size()) ++i_;
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_kw(std::string_view kw) const {
    return cur().kind == Tok::Ident && cur().text == kw;
  }
  [[noreturn]] void err(const std::string& msg) const {
    throw SyntaxError(msg, cur().line, cur().col);
  }
  void expect(Tok k, const char* what) {
    if (!at(k)) err(std::string("expected ") + what);
    bump();
  }
  std::string expect_ident(const char* what) {
    if (!at(Tok::Ident)) err(std::string("expected ") + what);
    std::string s = cur().text;
    bump();
    return s;
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) err("expected '" + std::string(kw) + "'");
    bump();
  }

  static std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> out;
    std::string line;
    for (char c : text) {
      if (c == '\n') {
        out.push_back(line);
        line.clear();
      } else {
        line += c;
      }
    }
    out.push_back(line);
    return out;
  }

  static bool is_reserved(const std::string& s) {
    static const char* words[] = {
        "fn", "record", "test", "let", "if", "else", "while", "return",
        "throw", "true", "false", "null", "is", "MIN_INT", "MAX_INT",
        "assert_eq", "assert_throws", "int", "float", "bool", "string"};
    for (const char* w : words)
      if (s == w) return true;
    return false;
  }

  std::string name_ident(const char* what) {
    if (!at(Tok::Ident)) err(std::string("expected ") + what);
    if (is_reserved(cur().text))
      err("'" + cur().text + "' is reserved");
    std::string s = cur().text;
    bump();
    return s;
  }

  // --- declarations --------------------------------------------------------

  RecordDecl record_decl() {
    RecordDecl r;
    r.line = cur().line;
    r.col = cur().col;
    expect_kw("record");
    r.name = name_ident("record name");
    expect(Tok::LBrace, "'{'");
    while (!at(Tok::RBrace)) {
      RecordField f;
      f.name = name_ident("field name");
      expect(Tok::Colon, "':'");
      f.type = type();
      r.fields.push_back(std::move(f));
      if (at(Tok::Comma)) {
        bump();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}'");
    return r;
  }

  FunctionDecl fn_decl() {
    FunctionDecl f;
    f.line = cur().line;
    f.col = cur().col;
    expect_kw("fn");
    f.name = name_ident("function name");
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      for (;;) {
        Param pr;
        pr.name = name_ident("parameter name");
        expect(Tok::Colon, "':'");
        pr.type = type();
        f.params.push_back(std::move(pr));
        if (at(Tok::Comma)) {
          bump();
          continue;
        }
        break;
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Arrow, "'->'");
    f.return_type = type();
    f.body = block();
    return f;
  }

  TestCase test_decl() {
    TestCase t;
    t.line = cur().line;
    t.col = cur().col;
    expect_kw("test");
    t.name = name_ident("test name");
    in_test_ = true;
    t.body = block();
    in_test_ = false;
    return t;
  }

  Type type() {
    Type t;
    if (at_kw("int")) t = Type::int_();
    else if (at_kw("float")) t = Type::float_();
    else if (at_kw("bool")) t = Type::bool_();
    else if (at_kw("string")) t = Type::string_();
    else t = Type::record(name_ident("type name"));
    bump_if_builtin(t);
    while (at(Tok::LBracket) && ahead().kind == Tok::RBracket) {
      bump();
      bump();
      t = Type::array(std::move(t));
    }
    return t;
  }
  void bump_if_builtin(const Type& t) {
    // primitive type keywords were matched but not consumed yet
    if (t.kind != TypeKind::Record) bump();
  }

  // --- statements ----------------------------------------------------------

  std::vector<StmtPtr> block() {
    expect(Tok::LBrace, "'{'");
    std::vector<StmtPtr> out;
    while (!at(Tok::RBrace)) out.push_back(stmt());
    expect(Tok::RBrace, "'}'");
    return out;
  }

  StmtPtr stmt() {
    int line = cur().line, col = cur().col;
    StmtPtr s;
    if (at_kw("let")) {
      bump();
      s = make_stmt(StmtKind::Let);
      s->name = name_ident("variable name");
      expect(Tok::Colon, "':'");
      s->decl_type = type();
      expect(Tok::Assign, "'='");
      s->expr = expr();
      expect(Tok::Semi, "';'");
    } else if (at_kw("if")) {
      bump();
      s = make_stmt(StmtKind::If);
      expect(Tok::LParen, "'('");
      s->expr = expr();
      expect(Tok::RParen, "')'");
      s->block = block();
      if (at_kw("else")) {
        bump();
        s->has_else = true;
        s->else_block = block();
      }
    } else if (at_kw("while")) {
      bump();
      s = make_stmt(StmtKind::While);
      expect(Tok::LParen, "'('");
      s->expr = expr();
      expect(Tok::RParen, "')'");
      s->block = block();
    } else if (at_kw("return")) {
      bump();
      s = make_stmt(StmtKind::Return);
      s->expr = expr();
      expect(Tok::Semi, "';'");
    } else if (at_kw("throw")) {
      bump();
      s = make_stmt(StmtKind::Throw);
      s->name = name_ident("exception name");
      expect(Tok::Semi, "';'");
    } else if (at_kw("assert_eq")) {
      if (!in_test_) err("assert_eq is only allowed inside tests");
      bump();
      s = make_stmt(StmtKind::AssertEq);
      expect(Tok::LParen, "'('");
      s->expr = expr();
      expect(Tok::Comma, "','");
      s->expr2 = expr();
      expect(Tok::RParen, "')'");
      expect(Tok::Semi, "';'");
    } else if (at_kw("assert_throws")) {
      if (!in_test_) err("assert_throws is only allowed inside tests");
      bump();
      s = make_stmt(StmtKind::AssertThrows);
      expect(Tok::LParen, "'('");
      s->name = name_ident("exception name");
      expect(Tok::Comma, "','");
      s->expr = expr();
      expect(Tok::RParen, "')'");
      expect(Tok::Semi, "';'");
    } else if (at(Tok::Ident) && !is_reserved(cur().text) &&
               ahead().kind == Tok::Assign) {
      s = make_stmt(StmtKind::Assign);
      s->name = cur().text;
      bump();
      bump();  // '='
      s->expr = expr();
      expect(Tok::Semi, "';'");
    } else {
      s = make_stmt(StmtKind::ExprStmt);
      s->expr = expr();
      expect(Tok::Semi, "';'");
    }
    s->line = line;
    s->col = col;
    return s;
  }

  // --- expressions ---------------------------------------------------------

  ExprPtr expr() { return or_expr(); }

  ExprPtr or_expr() {
    ExprPtr e = and_expr();
    while (at(Tok::OrOr)) {
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Binary);
      n->name = "||";
      n->line = line;
      n->col = col;
      n->args.push_back(std::move(e));
      n->args.push_back(and_expr());
      e = std::move(n);
    }
    return e;
  }

  ExprPtr and_expr() {
    ExprPtr e = cmp_expr();
    while (at(Tok::AndAnd)) {
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Binary);
      n->name = "&&";
      n->line = line;
      n->col = col;
      n->args.push_back(std::move(e));
      n->args.push_back(cmp_expr());
      e = std::move(n);
    }
    return e;
  }

  static const char* cmp_op(Tok k) {
    switch (k) {
      case Tok::Eq: return "==";
      case Tok::NotEq: return "!=";
      case Tok::Lt: return "<";
      case Tok::Le: return "<=";
      case Tok::Gt: return ">";
      case Tok::Ge: return ">=";
      default: return nullptr;
    }
  }

  ExprPtr cmp_expr() {
    ExprPtr e = add_expr();
    if (at_kw("is")) {
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Is);
      n->name = name_ident("record type name");
      n->line = line;
      n->col = col;
      n->args.push_back(std::move(e));
      return n;
    }
    if (const char* op = cmp_op(cur().kind)) {
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Binary);
      n->name = op;
      n->line = line;
      n->col = col;
      n->args.push_back(std::move(e));
      n->args.push_back(add_expr());
      if (cmp_op(cur().kind) || at_kw("is"))
        err("comparisons do not chain; use parentheses");
      return n;
    }
    return e;
  }

  ExprPtr add_expr() {
    ExprPtr e = mul_expr();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const char* op = at(Tok::Plus) ? "+" : "-";
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Binary);
      n->name = op;
      n->line = line;
      n->col = col;
      n->args.push_back(std::move(e));
      n->args.push_back(mul_expr());
      e = std::move(n);
    }
    return e;
  }

  ExprPtr mul_expr() {
    ExprPtr e = unary_expr();
    while (at(Tok::Star) || at(Tok::Slash) || at(Tok::Percent)) {
      const char* op = at(Tok::Star) ? "*" : at(Tok::Slash) ? "/" : "%";
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Binary);
      n->name = op;
      n->line = line;
      n->col = col;
      n->args.push_back(std::move(e));
      n->args.push_back(unary_expr());
      e = std::move(n);
    }
    return e;
  }

  ExprPtr unary_expr() {
    if (at(Tok::Minus) || at(Tok::Not)) {
      const char* op = at(Tok::Minus) ? "-" : "!";
      int line = cur().line, col = cur().col;
      bump();
      auto n = make_expr(ExprKind::Unary);
      n->name = op;
      n->line = line;
      n->col = col;
      n->args.push_back(unary_expr());
      return n;
    }
    return postfix_expr();
  }

  ExprPtr postfix_expr() {
    ExprPtr e = primary();
    for (;;) {
      if (at(Tok::LBracket)) {
        int line = cur().line, col = cur().col;
        bump();
        auto n = make_expr(ExprKind::Index);
        n->line = line;
        n->col = col;
        n->args.push_back(std::move(e));
        n->args.push_back(expr());
        expect(Tok::RBracket, "']'");
        e = std::move(n);
      } else if (at(Tok::Dot)) {
        int line = cur().line, col = cur().col;
        bump();
        auto n = make_expr(ExprKind::Field);
        n->name = name_ident("field name");
        n->line = line;
        n->col = col;
        n->args.push_back(std::move(e));
        e = std::move(n);
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    int line = cur().line, col = cur().col;
    auto lit = [&](ExprKind k) {
      auto e = make_expr(k);
      e->line = line;
      e->col = col;
      return e;
    };
    switch (cur().kind) {
      case Tok::IntLit: {
        auto e = lit(ExprKind::IntLit);
        e->int_val = cur().int_val;
        bump();
        return e;
      }
      case Tok::FloatLit: {
        auto e = lit(ExprKind::FloatLit);
        e->float_val = cur().float_val;
        bump();
        return e;
      }
      case Tok::StringLit: {
        auto e = lit(ExprKind::StringLit);
        e->str_val = cur().text;
        bump();
        return e;
      }
      case Tok::LBracket: {
        bump();
        auto e = lit(ExprKind::ArrayLit);
        if (!at(Tok::RBracket)) {
          for (;;) {
            e->args.push_back(expr());
            if (at(Tok::Comma)) {
              bump();
              continue;
            }
            break;
          }
        }
        expect(Tok::RBracket, "']'");
        return e;
      }
      case Tok::LParen: {
        bump();
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident: {
        const std::string& w = cur().text;
        if (w == "true" || w == "false") {
          auto e = lit(ExprKind::BoolLit);
          e->bool_val = (w == "true");
          bump();
          return e;
        }
        if (w == "null") {
          bump();
          return lit(ExprKind::NullLit);
        }
        if (w == "MIN_INT" || w == "MAX_INT") {
          auto e = lit(ExprKind::IntLit);
          e->int_val = (w == "MIN_INT")
                           ? std::numeric_limits<std::int64_t>::min()
                           : std::numeric_limits<std::int64_t>::max();
          bump();
          return e;
        }
        if (is_reserved(w)) err("'" + w + "' is reserved");
        if (ahead().kind == Tok::LParen) {
          auto e = lit(ExprKind::Call);
          e->name = w;
          bump();
          bump();  // '('
          if (!at(Tok::RParen)) {
            for (;;) {
              e->args.push_back(expr());
              if (at(Tok::Comma)) {
                bump();
                continue;
              }
              break;
            }
          }
          expect(Tok::RParen, "')'");
          return e;
        }
        if (ahead().kind == Tok::LBrace) {
          auto e = lit(ExprKind::RecordMake);
          e->name = w;
          bump();
          bump();  // '{'
          while (!at(Tok::RBrace)) {
            e->field_names.push_back(name_ident("field name"));
            expect(Tok::Colon, "':'");
            e->args.push_back(expr());
            if (at(Tok::Comma)) {
              bump();
              continue;
            }
            break;
          }
          expect(Tok::RBrace, "'}'");
          return e;
        }
        auto e = lit(ExprKind::Var);
        e->name = w;
        bump();
        return e;
      }
      default:
        err("expected expression");
    }
  }
};

inline Program parse_program(std::string_view src,
                             std::string source_name = "<input>") {
  return Parser(src, std::move(source_name)).parse();
}

}  // namespace acs
