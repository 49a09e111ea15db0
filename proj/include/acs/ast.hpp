#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace acs {

using NodeId = std::uint32_t;
constexpr NodeId kNoNode = 0;  // ids are assigned from 1

// ---------------------------------------------------------------------------
// Types

enum class TypeKind { Int, Float, Bool, String, Record, Array, Null, Void };

struct Type {
  TypeKind kind = TypeKind::Void;
  std::string record_name;          // TypeKind::Record
  std::shared_ptr<Type> elem;       // TypeKind::Array

  static Type int_() { return {TypeKind::Int, "", nullptr}; }
  static Type float_() { return {TypeKind::Float, "", nullptr}; }
  static Type bool_() { return {TypeKind::Bool, "", nullptr}; }
  static Type string_() { return {TypeKind::String, "", nullptr}; }
  static Type null_() { return {TypeKind::Null, "", nullptr}; }
  static Type void_() { return {TypeKind::Void, "", nullptr}; }
  static Type record(std::string name) {
    return {TypeKind::Record, std::move(name), nullptr};
  }
  static Type array(Type elem) {
    Type t{TypeKind::Array, "", nullptr};
    t.elem = std::make_shared<Type>(std::move(elem));
    return t;
  }

  bool is_numeric() const { return kind == TypeKind::Int || kind == TypeKind::Float; }
  // Types that admit the null value.
  bool is_nullable() const {
    return kind == TypeKind::String || kind == TypeKind::Record ||
           kind == TypeKind::Array;
  }

  friend bool operator==(const Type& a, const Type& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == TypeKind::Record) return a.record_name == b.record_name;
    if (a.kind == TypeKind::Array) {
      if (!a.elem || !b.elem) return !a.elem && !b.elem;
      return *a.elem == *b.elem;
    }
    return true;
  }
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }
};

inline std::string type_name(const Type& t) {
  switch (t.kind) {
    case TypeKind::Int: return "int";
    case TypeKind::Float: return "float";
    case TypeKind::Bool: return "bool";
    case TypeKind::String: return "string";
    case TypeKind::Record: return t.record_name;
    case TypeKind::Array: return (t.elem ? type_name(*t.elem) : "?") + "[]";
    case TypeKind::Null: return "null";
    case TypeKind::Void: return "void";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Expressions

enum class ExprKind {
  IntLit,
  FloatLit,
  BoolLit,
  StringLit,
  NullLit,
  ArrayLit,    // args = elements
  Var,         // name
  Unary,       // name = "-" | "!", args[0]
  Binary,      // name = operator text, args[0], args[1]
  Call,        // name = callee (user function or builtin), args
  Index,       // args[0][args[1]]
  Field,       // args[0].name
  RecordMake,  // name = record name, field_names[i] : args[i]
  Is,          // args[0] is name
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
  NodeId id = kNoNode;
  ExprKind kind = ExprKind::NullLit;
  std::int64_t int_val = 0;
  double float_val = 0.0;
  bool bool_val = false;
  std::string str_val;                   // StringLit
  std::string name;                      // Var/Unary/Binary/Call/Field/RecordMake/Is
  std::vector<std::string> field_names;  // RecordMake
  std::vector<ExprPtr> args;
  Type type;        // filled by the checker
  int line = 0, col = 0;
};

inline ExprPtr make_expr(ExprKind k) {
  auto e = std::make_unique<Expr>();
  e->kind = k;
  return e;
}

// ---------------------------------------------------------------------------
// Statements

enum class StmtKind {
  Let,         // let name: decl_type = expr
  Assign,      // name = expr
  If,          // expr, block, else_block (may be empty and absent)
  While,       // expr, block
  Return,      // expr
  Throw,       // name = exception name
  ExprStmt,    // expr
  AssertEq,    // args via expr (lhs) and expr2 (rhs); test files only
  AssertThrows // name = exception name, expr; test files only
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;

struct Stmt {
  NodeId id = kNoNode;
  StmtKind kind = StmtKind::ExprStmt;
  std::string name;   // Let/Assign target, Throw/AssertThrows exception name
  Type decl_type;     // Let
  ExprPtr expr;       // primary expression
  ExprPtr expr2;      // AssertEq second expression
  std::vector<StmtPtr> block;       // If then / While body
  std::vector<StmtPtr> else_block;  // If else
  bool has_else = false;
  int line = 0, col = 0;
};

inline StmtPtr make_stmt(StmtKind k) {
  auto s = std::make_unique<Stmt>();
  s->kind = k;
  return s;
}

// ---------------------------------------------------------------------------
// Declarations

struct DocComment {
  // Raw comment text including the /** */ delimiters, reproduced verbatim
  // by the printer.
  std::vector<std::string> lines;
};

struct Param {
  std::string name;
  Type type;
};

struct FunctionDecl {
  NodeId id = kNoNode;
  std::string name;
  std::vector<Param> params;
  Type return_type;
  std::vector<StmtPtr> body;
  std::optional<DocComment> doc;
  int line = 0, col = 0;
};

struct RecordField {
  std::string name;
  Type type;
};

struct RecordDecl {
  NodeId id = kNoNode;
  std::string name;
  std::vector<RecordField> fields;
  int line = 0, col = 0;
};

struct TestCase {
  NodeId id = kNoNode;
  std::string name;
  std::vector<StmtPtr> body;
  // NodeIds of the top-level assert statements, in source order. Assertion
  // index k names the unit (test, k).
  std::vector<NodeId> assertions;
  int line = 0, col = 0;
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<FunctionDecl> functions;
  std::vector<TestCase> tests;
  std::string source_name;

  const FunctionDecl* find_function(const std::string& n) const {
    for (const auto& f : functions)
      if (f.name == n) return &f;
    return nullptr;
  }
  FunctionDecl* find_function(const std::string& n) {
    for (auto& f : functions)
      if (f.name == n) return &f;
    return nullptr;
  }
  const RecordDecl* find_record(const std::string& n) const {
    for (const auto& r : records)
      if (r.name == n) return &r;
    return nullptr;
  }
  const TestCase* find_test(const std::string& n) const {
    for (const auto& t : tests)
      if (t.name == n) return &t;
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Cloning

inline ExprPtr clone_expr(const Expr& e) {
  auto c = std::make_unique<Expr>();
  c->id = e.id;
  c->kind = e.kind;
  c->int_val = e.int_val;
  c->float_val = e.float_val;
  c->bool_val = e.bool_val;
  c->str_val = e.str_val;
  c->name = e.name;
  c->field_names = e.field_names;
  c->type = e.type;
  c->line = e.line;
  c->col = e.col;
  for (const auto& a : e.args) c->args.push_back(clone_expr(*a));
  return c;
}

inline StmtPtr clone_stmt(const Stmt& s) {
  auto c = std::make_unique<Stmt>();
  c->id = s.id;
  c->kind = s.kind;
  c->name = s.name;
  c->decl_type = s.decl_type;
  c->has_else = s.has_else;
  c->line = s.line;
  c->col = s.col;
  if (s.expr) c->expr = clone_expr(*s.expr);
  if (s.expr2) c->expr2 = clone_expr(*s.expr2);
  for (const auto& b : s.block) c->block.push_back(clone_stmt(*b));
  for (const auto& b : s.else_block) c->else_block.push_back(clone_stmt(*b));
  return c;
}

inline Program clone_program(const Program& p) {
  Program c;
  c.source_name = p.source_name;
  c.records = p.records;  // records hold no owned pointers
  for (const auto& f : p.functions) {
    FunctionDecl fd;
    fd.id = f.id;
    fd.name = f.name;
    fd.params = f.params;
    fd.return_type = f.return_type;
    fd.doc = f.doc;
    fd.line = f.line;
    fd.col = f.col;
    for (const auto& s : f.body) fd.body.push_back(clone_stmt(*s));
    c.functions.push_back(std::move(fd));
  }
  for (const auto& t : p.tests) {
    TestCase tc;
    tc.id = t.id;
    tc.name = t.name;
    tc.assertions = t.assertions;
    tc.line = t.line;
    tc.col = t.col;
    for (const auto& s : t.body) tc.body.push_back(clone_stmt(*s));
    c.tests.push_back(std::move(tc));
  }
  return c;
}

// ---------------------------------------------------------------------------
// NodeId assignment: deterministic pre-order numbering over the whole
// program (records, then functions, then tests, in declaration order).
// Two parses of identical text therefore agree on every id.

namespace detail {

struct IdAssigner {
  NodeId next = 1;

  void expr(Expr& e) {
    e.id = next++;
    for (auto& a : e.args) expr(*a);
  }
  void stmt(Stmt& s) {
    s.id = next++;
    if (s.expr) expr(*s.expr);
    if (s.expr2) expr(*s.expr2);
    for (auto& b : s.block) stmt(*b);
    for (auto& b : s.else_block) stmt(*b);
  }
};

}  // namespace detail

inline void assign_node_ids(Program& p) {
  detail::IdAssigner a;
  for (auto& r : p.records) r.id = a.next++;
  for (auto& f : p.functions) {
    f.id = a.next++;
    for (auto& s : f.body) a.stmt(*s);
  }
  for (auto& t : p.tests) {
    t.id = a.next++;
    for (auto& s : t.body) a.stmt(*s);
    t.assertions.clear();
    for (auto& s : t.body)
      if (s->kind == StmtKind::AssertEq || s->kind == StmtKind::AssertThrows)
        t.assertions.push_back(s->id);
  }
}

// ---------------------------------------------------------------------------
// Structural equality, NodeIds ignored. Used by round-trip tests and the
// patch-locality checks.

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.name != b.name) return false;
  switch (a.kind) {
    case ExprKind::IntLit:
      if (a.int_val != b.int_val) return false;
      break;
    case ExprKind::FloatLit: {
      // compare by bit pattern so 0.0 and -0.0 stay distinct
      double x = a.float_val, y = b.float_val;
      if (std::memcmp(&x, &y, sizeof x) != 0) return false;
      break;
    }
    case ExprKind::BoolLit:
      if (a.bool_val != b.bool_val) return false;
      break;
    case ExprKind::StringLit:
      if (a.str_val != b.str_val) return false;
      break;
    case ExprKind::RecordMake:
      if (a.field_names != b.field_names) return false;
      break;
    default:
      break;
  }
  if (a.args.size() != b.args.size()) return false;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

inline bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind || a.name != b.name || a.has_else != b.has_else)
    return false;
  if (a.kind == StmtKind::Let && a.decl_type != b.decl_type) return false;
  if (static_cast<bool>(a.expr) != static_cast<bool>(b.expr)) return false;
  if (a.expr && !structurally_equal(*a.expr, *b.expr)) return false;
  if (static_cast<bool>(a.expr2) != static_cast<bool>(b.expr2)) return false;
  if (a.expr2 && !structurally_equal(*a.expr2, *b.expr2)) return false;
  auto blocks_equal = [](const std::vector<StmtPtr>& x,
                         const std::vector<StmtPtr>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (!structurally_equal(*x[i], *y[i])) return false;
    return true;
  };
  return blocks_equal(a.block, b.block) &&
         blocks_equal(a.else_block, b.else_block);
}

inline bool structurally_equal(const Program& a, const Program& b) {
  if (a.records.size() != b.records.size() ||
      a.functions.size() != b.functions.size() ||
      a.tests.size() != b.tests.size())
    return false;
  for (size_t i = 0; i < a.records.size(); ++i) {
    const auto& ra = a.records[i];
    const auto& rb = b.records[i];
    if (ra.name != rb.name || ra.fields.size() != rb.fields.size())
      return false;
    for (size_t j = 0; j < ra.fields.size(); ++j)
      if (ra.fields[j].name != rb.fields[j].name ||
          ra.fields[j].type != rb.fields[j].type)
        return false;
  }
  auto bodies_equal = [](const std::vector<StmtPtr>& x,
                         const std::vector<StmtPtr>& y) {
    if (x.size() != y.size()) return false;
    for (size_t i = 0; i < x.size(); ++i)
      if (!structurally_equal(*x[i], *y[i])) return false;
    return true;
  };
  for (size_t i = 0; i < a.functions.size(); ++i) {
    const auto& fa = a.functions[i];
    const auto& fb = b.functions[i];
    if (fa.name != fb.name || fa.return_type != fb.return_type) return false;
    if (fa.params.size() != fb.params.size()) return false;
    for (size_t j = 0; j < fa.params.size(); ++j)
      if (fa.params[j].name != fb.params[j].name ||
          fa.params[j].type != fb.params[j].type)
        return false;
    if (static_cast<bool>(fa.doc) != static_cast<bool>(fb.doc)) return false;
    if (fa.doc && fa.doc->lines != fb.doc->lines) return false;
    if (!bodies_equal(fa.body, fb.body)) return false;
  }
  for (size_t i = 0; i < a.tests.size(); ++i) {
    if (a.tests[i].name != b.tests[i].name) return false;
    if (!bodies_equal(a.tests[i].body, b.tests[i].body)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lookup helpers

namespace detail {

template <typename F>
void for_each_stmt(const std::vector<StmtPtr>& block, F&& f) {
  for (const auto& s : block) {
    f(*s);
    for_each_stmt(s->block, f);
    for_each_stmt(s->else_block, f);
  }
}

template <typename F>
void for_each_expr_in(const Expr& e, F&& f) {
  f(e);
  for (const auto& a : e.args) for_each_expr_in(*a, f);
}

}  // namespace detail

template <typename F>
void for_each_statement(const FunctionDecl& fn, F&& f) {
  detail::for_each_stmt(fn.body, f);
}

template <typename F>
void for_each_statement(const Program& p, F&& f) {
  for (const auto& fn : p.functions) detail::for_each_stmt(fn.body, f);
  for (const auto& t : p.tests) detail::for_each_stmt(t.body, f);
}

inline const Stmt* find_stmt(const Program& p, NodeId id) {
  const Stmt* found = nullptr;
  for_each_statement(p, [&](const Stmt& s) {
    if (s.id == id) found = &s;
  });
  return found;
}

// Function owning a statement id, if any (test-body statements belong to
// no function).
inline const FunctionDecl* enclosing_function(const Program& p, NodeId stmt_id) {
  for (const auto& fn : p.functions) {
    bool found = false;
    for_each_statement(fn, [&](const Stmt& s) {
      if (s.id == stmt_id) found = true;
    });
    if (found) return &fn;
  }
  return nullptr;
}

// Every variable name referenced anywhere inside an expression.
inline void collect_vars(const Expr& e, std::vector<std::string>& out) {
  detail::for_each_expr_in(e, [&](const Expr& x) {
    if (x.kind == ExprKind::Var) out.push_back(x.name);
  });
}

inline std::vector<std::string> vars_of(const Expr& e) {
  std::vector<std::string> v;
  collect_vars(e, v);
  return v;
}

}  // namespace acs
