#pragma once

#include <charconv>
#include <cstdint>
#include <limits>
#include <string>

#include "acs/ast.hpp"

namespace acs {

// Canonical float formatting: shortest round-trip form, always re-lexable
// as a float literal (a '.' or exponent is guaranteed).
inline std::string format_float(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, p);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

inline std::string format_int(std::int64_t v) {
  if (v == std::numeric_limits<std::int64_t>::min()) return "MIN_INT";
  if (v == std::numeric_limits<std::int64_t>::max()) return "MAX_INT";
  return std::to_string(v);
}

// Canonical source printer. Precedence-driven parenthesization with one
// house rule: comparison operands of '&&' / '||' are always parenthesized,
// so synthesized conditions print as e.g. (a >= 0.0) && !(a == 0.0).
class Printer {
 public:
  std::string print(const Program& p) {
    out_.clear();
    bool first = true;
    for (const auto& r : p.records) {
      if (!first) out_ += "\n";
      first = false;
      print_record(r);
    }
    for (const auto& f : p.functions) {
      if (!first) out_ += "\n";
      first = false;
      print_function(f);
    }
    for (const auto& t : p.tests) {
      if (!first) out_ += "\n";
      first = false;
      print_test(t);
    }
    return out_;
  }

  std::string print_expression(const Expr& e) {
    out_.clear();
    expr(e, 0);
    return out_;
  }

  std::string print_statement(const Stmt& s) {
    out_.clear();
    stmt(s, 0);
    return out_;
  }

 private:
  std::string out_;

  void indent(int depth) { out_.append(static_cast<size_t>(depth) * 4, ' '); }

  void print_record(const RecordDecl& r) {
    out_ += "record " + r.name + " {\n";
    for (const auto& f : r.fields)
      out_ += "    " + f.name + ": " + type_name(f.type) + ",\n";
    out_ += "}\n";
  }

  void print_function(const FunctionDecl& f) {
    if (f.doc)
      for (const auto& line : f.doc->lines) out_ += line + "\n";
    out_ += "fn " + f.name + "(";
    for (size_t i = 0; i < f.params.size(); ++i) {
      if (i) out_ += ", ";
      out_ += f.params[i].name + ": " + type_name(f.params[i].type);
    }
    out_ += ") -> " + type_name(f.return_type) + " {\n";
    for (const auto& s : f.body) stmt(*s, 1);
    out_ += "}\n";
  }

  void print_test(const TestCase& t) {
    out_ += "test " + t.name + " {\n";
    for (const auto& s : t.body) stmt(*s, 1);
    out_ += "}\n";
  }

  void stmt(const Stmt& s, int depth) {
    indent(depth);
    switch (s.kind) {
      case StmtKind::Let:
        out_ += "let " + s.name + ": " + type_name(s.decl_type) + " = ";
        expr(*s.expr, 0);
        out_ += ";\n";
        break;
      case StmtKind::Assign:
        out_ += s.name + " = ";
        expr(*s.expr, 0);
        out_ += ";\n";
        break;
      case StmtKind::If:
        out_ += "if (";
        expr(*s.expr, 0);
        out_ += ") {\n";
        for (const auto& b : s.block) stmt(*b, depth + 1);
        indent(depth);
        out_ += "}";
        if (s.has_else) {
          out_ += " else {\n";
          for (const auto& b : s.else_block) stmt(*b, depth + 1);
          indent(depth);
          out_ += "}";
        }
        out_ += "\n";
        break;
      case StmtKind::While:
        out_ += "while (";
        expr(*s.expr, 0);
        out_ += ") {\n";
        for (const auto& b : s.block) stmt(*b, depth + 1);
        indent(depth);
        out_ += "}\n";
        break;
      case StmtKind::Return:
        out_ += "return ";
        expr(*s.expr, 0);
        out_ += ";\n";
        break;
      case StmtKind::Throw:
        out_ += "throw " + s.name + ";\n";
        break;
      case StmtKind::ExprStmt:
        expr(*s.expr, 0);
        out_ += ";\n";
        break;
      case StmtKind::AssertEq:
        out_ += "assert_eq(";
        expr(*s.expr, 0);
        out_ += ", ";
        expr(*s.expr2, 0);
        out_ += ");\n";
        break;
      case StmtKind::AssertThrows:
        out_ += "assert_throws(" + s.name + ", ";
        expr(*s.expr, 0);
        out_ += ");\n";
        break;
    }
  }

  // precedence tiers; larger binds tighter
  static int prec_of(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Binary: {
        const std::string& op = e.name;
        if (op == "||") return 1;
        if (op == "&&") return 2;
        if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
            op == ">=")
          return 3;
        if (op == "+" || op == "-") return 4;
        return 5;  // * / %
      }
      case ExprKind::Is: return 3;
      case ExprKind::Unary: return 6;
      default: return 7;
    }
  }

  static bool is_comparison(const Expr& e) {
    if (e.kind == ExprKind::Is) return true;
    if (e.kind != ExprKind::Binary) return false;
    const std::string& op = e.name;
    return op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
           op == ">=";
  }

  void child(const Expr& e, int min_prec, bool force_parens = false) {
    bool parens = force_parens || prec_of(e) < min_prec;
    if (parens) out_ += "(";
    expr(e, 0);
    if (parens) out_ += ")";
  }

  void expr(const Expr& e, int) {
    switch (e.kind) {
      case ExprKind::IntLit:
        out_ += format_int(e.int_val);
        break;
      case ExprKind::FloatLit:
        out_ += format_float(e.float_val);
        break;
      case ExprKind::BoolLit:
        out_ += e.bool_val ? "true" : "false";
        break;
      case ExprKind::StringLit:
        out_ += '"';
        for (char c : e.str_val) {
          switch (c) {
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\\': out_ += "\\\\"; break;
            case '"': out_ += "\\\""; break;
            default: out_ += c;
          }
        }
        out_ += '"';
        break;
      case ExprKind::NullLit:
        out_ += "null";
        break;
      case ExprKind::ArrayLit:
        out_ += "[";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) out_ += ", ";
          expr(*e.args[i], 0);
        }
        out_ += "]";
        break;
      case ExprKind::Var:
        out_ += e.name;
        break;
      case ExprKind::Unary:
        out_ += e.name;
        child(*e.args[0], 6);
        break;
      case ExprKind::Binary: {
        int p = prec_of(e);
        bool logical = (e.name == "&&" || e.name == "||");
        // left child: same tier allowed (left associative); comparisons do
        // not chain, so their children need the next tier up
        int left_min = is_comparison(e) ? p + 1 : p;
        child(*e.args[0], left_min, logical && is_comparison(*e.args[0]));
        out_ += " " + e.name + " ";
        child(*e.args[1], p + 1, logical && is_comparison(*e.args[1]));
        break;
      }
      case ExprKind::Call:
        out_ += e.name + "(";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) out_ += ", ";
          expr(*e.args[i], 0);
        }
        out_ += ")";
        break;
      case ExprKind::Index:
        child(*e.args[0], 7);
        out_ += "[";
        expr(*e.args[1], 0);
        out_ += "]";
        break;
      case ExprKind::Field:
        child(*e.args[0], 7);
        out_ += "." + e.name;
        break;
      case ExprKind::RecordMake:
        out_ += e.name + "{";
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i) out_ += ", ";
          out_ += e.field_names[i] + ": ";
          expr(*e.args[i], 0);
        }
        out_ += "}";
        break;
      case ExprKind::Is:
        child(*e.args[0], 4);
        out_ += " is " + e.name;
        break;
    }
  }
};

inline std::string print_program(const Program& p) { return Printer().print(p); }

inline std::string print_expr(const Expr& e) {
  return Printer().print_expression(e);
}

inline std::string print_stmt(const Stmt& s) {
  return Printer().print_statement(s);
}

}  // namespace acs
