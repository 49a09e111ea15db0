#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acs/ast.hpp"

namespace acs {

// Name-resolution failures (unknown function, record, variable, field,
// duplicate declarations).
struct ResolveError : std::runtime_error {
  int line, col;
  ResolveError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

// Static type mismatches.
struct TypeError : std::runtime_error {
  int line, col;
  TypeError(const std::string& msg, int line_, int col_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(col_)),
        line(line_),
        col(col_) {}
};

inline bool is_builtin_callee(const std::string& n) {
  return n == "equals" || n == "starts_with" || n == "length";
}

// Resolves names and computes static types for every expression in the
// program, storing them into Expr::type. Throws ResolveError / TypeError.
class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  void run() {
    declare_toplevel();
    for (auto& f : p_.functions) check_function(f);
    for (auto& t : p_.tests) check_test(t);
  }

 private:
  Program& p_;
  std::map<std::string, const RecordDecl*> records_;
  std::map<std::string, const FunctionDecl*> functions_;
  // current function scope: one flat namespace per function (no shadowing)
  std::map<std::string, Type> scope_;
  std::vector<std::vector<std::string>> block_vars_;
  Type return_type_;

  void declare_toplevel() {
    for (auto& r : p_.records) {
      if (records_.count(r.name))
        throw ResolveError("duplicate record '" + r.name + "'", r.line, r.col);
      std::set<std::string> seen;
      for (auto& f : r.fields) {
        if (!seen.insert(f.name).second)
          throw ResolveError("duplicate field '" + f.name + "' in record '" +
                                 r.name + "'",
                             r.line, r.col);
        validate_type(f.type, r.line, r.col);
      }
      records_[r.name] = &r;
    }
    for (auto& f : p_.functions) {
      if (is_builtin_callee(f.name))
        throw ResolveError("'" + f.name + "' is a builtin and cannot be defined",
                           f.line, f.col);
      if (functions_.count(f.name))
        throw ResolveError("duplicate function '" + f.name + "'", f.line,
                           f.col);
      functions_[f.name] = &f;
    }
    std::set<std::string> test_names;
    for (auto& t : p_.tests)
      if (!test_names.insert(t.name).second)
        throw ResolveError("duplicate test '" + t.name + "'", t.line, t.col);
    // validate signature types after all records are known
    for (auto& f : p_.functions) {
      for (auto& pr : f.params) validate_type(pr.type, f.line, f.col);
      validate_type(f.return_type, f.line, f.col);
    }
  }

  void validate_type(const Type& t, int line, int col) {
    if (t.kind == TypeKind::Record && !records_.count(t.record_name))
      throw ResolveError("unknown record type '" + t.record_name + "'", line,
                         col);
    if (t.kind == TypeKind::Array) validate_type(*t.elem, line, col);
  }

  static bool assignable(const Type& target, const Type& actual) {
    if (target == actual) return true;
    return actual.kind == TypeKind::Null && target.is_nullable();
  }

  void declare_var(const std::string& name, const Type& t, int line, int col) {
    if (scope_.count(name))
      throw ResolveError("variable '" + name + "' already declared", line,
                         col);
    scope_[name] = t;
    block_vars_.back().push_back(name);
  }

  void push_block() { block_vars_.emplace_back(); }
  void pop_block() {
    for (const auto& n : block_vars_.back()) scope_.erase(n);
    block_vars_.pop_back();
  }

  void check_function(FunctionDecl& f) {
    scope_.clear();
    block_vars_.clear();
    push_block();
    for (auto& pr : f.params) declare_var(pr.name, pr.type, f.line, f.col);
    return_type_ = f.return_type;
    check_block(f.body, /*in_test=*/false);
    pop_block();
  }

  void check_test(TestCase& t) {
    scope_.clear();
    block_vars_.clear();
    push_block();
    return_type_ = Type::void_();
    check_block(t.body, /*in_test=*/true);
    pop_block();
  }

  void check_block(std::vector<StmtPtr>& block, bool in_test) {
    for (auto& s : block) check_stmt(*s, in_test);
  }

  void check_stmt(Stmt& s, bool in_test) {
    switch (s.kind) {
      case StmtKind::Let: {
        validate_type(s.decl_type, s.line, s.col);
        Type t = check_expr(*s.expr, &s.decl_type);
        if (!assignable(s.decl_type, t))
          throw TypeError("cannot initialize '" + s.name + "' of type " +
                              type_name(s.decl_type) + " with " + type_name(t),
                          s.line, s.col);
        declare_var(s.name, s.decl_type, s.line, s.col);
        break;
      }
      case StmtKind::Assign: {
        auto it = scope_.find(s.name);
        if (it == scope_.end())
          throw ResolveError("unknown variable '" + s.name + "'", s.line,
                             s.col);
        Type t = check_expr(*s.expr, &it->second);
        if (!assignable(it->second, t))
          throw TypeError("cannot assign " + type_name(t) + " to '" + s.name +
                              "' of type " + type_name(it->second),
                          s.line, s.col);
        break;
      }
      case StmtKind::If: {
        Type c = check_expr(*s.expr, nullptr);
        if (c.kind != TypeKind::Bool)
          throw TypeError("if condition must be bool, got " + type_name(c),
                          s.line, s.col);
        push_block();
        check_block(s.block, in_test);
        pop_block();
        if (s.has_else) {
          push_block();
          check_block(s.else_block, in_test);
          pop_block();
        }
        break;
      }
      case StmtKind::While: {
        Type c = check_expr(*s.expr, nullptr);
        if (c.kind != TypeKind::Bool)
          throw TypeError("while condition must be bool, got " + type_name(c),
                          s.line, s.col);
        push_block();
        check_block(s.block, in_test);
        pop_block();
        break;
      }
      case StmtKind::Return: {
        if (in_test)
          throw TypeError("return is not allowed inside tests", s.line, s.col);
        Type t = check_expr(*s.expr, &return_type_);
        if (!assignable(return_type_, t))
          throw TypeError("return type mismatch: expected " +
                              type_name(return_type_) + ", got " + type_name(t),
                          s.line, s.col);
        break;
      }
      case StmtKind::Throw:
        break;
      case StmtKind::ExprStmt:
        check_expr(*s.expr, nullptr);
        break;
      case StmtKind::AssertEq: {
        Type a = check_expr(*s.expr, nullptr);
        Type b = check_expr(*s.expr2, &a);
        if (!assignable(a, b) && !assignable(b, a))
          throw TypeError("assert_eq operands have incompatible types " +
                              type_name(a) + " and " + type_name(b),
                          s.line, s.col);
        break;
      }
      case StmtKind::AssertThrows:
        check_expr(*s.expr, nullptr);
        break;
    }
  }

  Type check_expr(Expr& e, const Type* hint) {
    e.type = infer_expr(e, hint);
    return e.type;
  }

  Type infer_expr(Expr& e, const Type* hint) {
    switch (e.kind) {
      case ExprKind::IntLit: return Type::int_();
      case ExprKind::FloatLit: return Type::float_();
      case ExprKind::BoolLit: return Type::bool_();
      case ExprKind::StringLit: return Type::string_();
      case ExprKind::NullLit: return Type::null_();
      case ExprKind::ArrayLit: {
        if (e.args.empty()) {
          if (hint && hint->kind == TypeKind::Array) return *hint;
          throw TypeError("cannot infer element type of empty array literal",
                          e.line, e.col);
        }
        const Type* elem_hint = nullptr;
        if (hint && hint->kind == TypeKind::Array) elem_hint = hint->elem.get();
        Type first = check_expr(*e.args[0], elem_hint);
        for (size_t i = 1; i < e.args.size(); ++i) {
          Type t = check_expr(*e.args[i], &first);
          if (t != first)
            throw TypeError("array literal elements disagree: " +
                                type_name(first) + " vs " + type_name(t),
                            e.line, e.col);
        }
        return Type::array(first);
      }
      case ExprKind::Var: {
        auto it = scope_.find(e.name);
        if (it == scope_.end())
          throw ResolveError("unknown variable '" + e.name + "'", e.line,
                             e.col);
        return it->second;
      }
      case ExprKind::Unary: {
        Type t = check_expr(*e.args[0], nullptr);
        if (e.name == "-") {
          if (!t.is_numeric())
            throw TypeError("unary '-' needs int or float, got " + type_name(t),
                            e.line, e.col);
          return t;
        }
        if (t.kind != TypeKind::Bool)
          throw TypeError("'!' needs bool, got " + type_name(t), e.line,
                          e.col);
        return Type::bool_();
      }
      case ExprKind::Binary: return infer_binary(e);
      case ExprKind::Call: return infer_call(e);
      case ExprKind::Index: {
        Type a = check_expr(*e.args[0], nullptr);
        if (a.kind != TypeKind::Array)
          throw TypeError("indexing needs an array, got " + type_name(a),
                          e.line, e.col);
        Type i = check_expr(*e.args[1], nullptr);
        if (i.kind != TypeKind::Int)
          throw TypeError("array index must be int, got " + type_name(i),
                          e.line, e.col);
        return *a.elem;
      }
      case ExprKind::Field: {
        Type r = check_expr(*e.args[0], nullptr);
        if (r.kind != TypeKind::Record)
          throw TypeError("field access needs a record, got " + type_name(r),
                          e.line, e.col);
        const RecordDecl* rd = records_.at(r.record_name);
        for (const auto& f : rd->fields)
          if (f.name == e.name) return f.type;
        throw ResolveError("record '" + rd->name + "' has no field '" + e.name +
                               "'",
                           e.line, e.col);
      }
      case ExprKind::RecordMake: {
        auto it = records_.find(e.name);
        if (it == records_.end())
          throw ResolveError("unknown record '" + e.name + "'", e.line, e.col);
        const RecordDecl* rd = it->second;
        if (e.field_names.size() != rd->fields.size())
          throw TypeError("record '" + rd->name + "' needs exactly " +
                              std::to_string(rd->fields.size()) + " fields",
                          e.line, e.col);
        std::set<std::string> seen;
        for (size_t i = 0; i < e.field_names.size(); ++i) {
          const std::string& fname = e.field_names[i];
          if (!seen.insert(fname).second)
            throw TypeError("field '" + fname + "' given twice", e.line,
                            e.col);
          const RecordField* rf = nullptr;
          for (const auto& f : rd->fields)
            if (f.name == fname) rf = &f;
          if (!rf)
            throw ResolveError("record '" + rd->name + "' has no field '" +
                                   fname + "'",
                               e.line, e.col);
          Type t = check_expr(*e.args[i], &rf->type);
          if (!assignable(rf->type, t))
            throw TypeError("field '" + fname + "' expects " +
                                type_name(rf->type) + ", got " + type_name(t),
                            e.line, e.col);
        }
        return Type::record(e.name);
      }
      case ExprKind::Is: {
        Type t = check_expr(*e.args[0], nullptr);
        if (t.kind != TypeKind::Record && t.kind != TypeKind::Null)
          throw TypeError("'is' needs a record value, got " + type_name(t),
                          e.line, e.col);
        if (!records_.count(e.name))
          throw ResolveError("unknown record type '" + e.name + "'", e.line,
                             e.col);
        return Type::bool_();
      }
    }
    throw TypeError("unreachable expression kind", e.line, e.col);
  }

  Type infer_binary(Expr& e) {
    const std::string& op = e.name;
    if (op == "&&" || op == "||") {
      Type a = check_expr(*e.args[0], nullptr);
      Type b = check_expr(*e.args[1], nullptr);
      if (a.kind != TypeKind::Bool || b.kind != TypeKind::Bool)
        throw TypeError("'" + op + "' needs bool operands", e.line, e.col);
      return Type::bool_();
    }
    if (op == "==" || op == "!=") {
      Type a = check_expr(*e.args[0], nullptr);
      Type b = check_expr(*e.args[1], nullptr);
      bool ok = (a == b && (a.kind == TypeKind::Int ||
                            a.kind == TypeKind::Float ||
                            a.kind == TypeKind::Bool)) ||
                (a.kind == TypeKind::Null && b.is_nullable()) ||
                (b.kind == TypeKind::Null && a.is_nullable()) ||
                (a.kind == TypeKind::Null && b.kind == TypeKind::Null);
      if (!ok)
        throw TypeError("'" + op + "' cannot compare " + type_name(a) +
                            " and " + type_name(b) +
                            (a == b && a.is_nullable()
                                 ? "; use equals(...)"
                                 : ""),
                        e.line, e.col);
      return Type::bool_();
    }
    if (op == "<" || op == "<=" || op == ">" || op == ">=") {
      Type a = check_expr(*e.args[0], nullptr);
      Type b = check_expr(*e.args[1], nullptr);
      if (!(a == b && a.is_numeric()))
        throw TypeError("'" + op + "' needs two ints or two floats, got " +
                            type_name(a) + " and " + type_name(b),
                        e.line, e.col);
      return Type::bool_();
    }
    // arithmetic
    Type a = check_expr(*e.args[0], nullptr);
    Type b = check_expr(*e.args[1], nullptr);
    if (op == "%") {
      if (!(a.kind == TypeKind::Int && b.kind == TypeKind::Int))
        throw TypeError("'%' needs int operands", e.line, e.col);
      return Type::int_();
    }
    if (!(a == b && a.is_numeric()))
      throw TypeError("'" + op + "' needs two ints or two floats, got " +
                          type_name(a) + " and " + type_name(b),
                      e.line, e.col);
    return a;
  }

  Type infer_call(Expr& e) {
    if (e.name == "equals") {
      if (e.args.size() != 2)
        throw TypeError("equals(a, b) takes two arguments", e.line, e.col);
      Type a = check_expr(*e.args[0], nullptr);
      Type b = check_expr(*e.args[1], nullptr);
      auto ok_side = [](const Type& t) {
        return t.kind == TypeKind::String || t.kind == TypeKind::Record ||
               t.kind == TypeKind::Null;
      };
      bool compatible =
          ok_side(a) && ok_side(b) &&
          (a.kind == TypeKind::Null || b.kind == TypeKind::Null ||
           a.kind == b.kind);
      if (!compatible)
        throw TypeError("equals(...) needs strings or records, got " +
                            type_name(a) + " and " + type_name(b),
                        e.line, e.col);
      return Type::bool_();
    }
    if (e.name == "starts_with") {
      if (e.args.size() != 2)
        throw TypeError("starts_with(s, prefix) takes two arguments", e.line,
                        e.col);
      Type a = check_expr(*e.args[0], nullptr);
      Type b = check_expr(*e.args[1], nullptr);
      if (a.kind != TypeKind::String || b.kind != TypeKind::String)
        throw TypeError("starts_with(...) needs string arguments", e.line,
                        e.col);
      return Type::bool_();
    }
    if (e.name == "length") {
      if (e.args.size() != 1)
        throw TypeError("length(a) takes one argument", e.line, e.col);
      Type a = check_expr(*e.args[0], nullptr);
      if (a.kind != TypeKind::Array)
        throw TypeError("length(...) needs an array, got " + type_name(a),
                        e.line, e.col);
      return Type::int_();
    }
    auto it = functions_.find(e.name);
    if (it == functions_.end())
      throw ResolveError("unknown function '" + e.name + "'", e.line, e.col);
    const FunctionDecl* f = it->second;
    if (e.args.size() != f->params.size())
      throw TypeError("'" + f->name + "' takes " +
                          std::to_string(f->params.size()) + " arguments, got " +
                          std::to_string(e.args.size()),
                      e.line, e.col);
    for (size_t i = 0; i < e.args.size(); ++i) {
      Type t = check_expr(*e.args[i], &f->params[i].type);
      if (!assignable(f->params[i].type, t))
        throw TypeError("argument " + std::to_string(i + 1) + " of '" +
                            f->name + "' expects " +
                            type_name(f->params[i].type) + ", got " +
                            type_name(t),
                        e.line, e.col);
    }
    return f->return_type;
  }
};

inline void check_program(Program& p) { Checker(p).run(); }

}  // namespace acs
