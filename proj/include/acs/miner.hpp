#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "acs/ast.hpp"
#include "acs/check.hpp"
#include "acs/doc_filter.hpp"
#include "acs/interp.hpp"
#include "acs/parser.hpp"
#include "acs/printer.hpp"
#include "acs/value.hpp"

namespace acs {

struct EmptyCorpus : std::runtime_error {
  EmptyCorpus() : std::runtime_error("corpus yielded no predicates") {}
};

// ---------------------------------------------------------------------------
// Predicates

enum class PredForm { EqConst, EqualsConst, TypeTest, Lt, Le, Gt, Ge };

inline const char* pred_form_mnemonic(PredForm f) {
  switch (f) {
    case PredForm::EqConst: return "eq";
    case PredForm::EqualsConst: return "equals";
    case PredForm::Ge: return "ge";
    case PredForm::Gt: return "gt";
    case PredForm::TypeTest: return "is";
    case PredForm::Le: return "le";
    case PredForm::Lt: return "lt";
  }
  return "";
}

// A predicate over a single operand: comparison or structural equality with
// a constant, or a record type test.
struct Predicate {
  PredForm form = PredForm::EqConst;
  Value constant;           // unused for TypeTest
  std::string record_name;  // TypeTest only
  Type operand_type;
};

inline Predicate make_predicate(PredForm form, Value constant, Type operand) {
  Predicate p;
  p.form = form;
  // Negative zero and positive zero are one constant.
  if (constant.kind == ValueKind::Float && constant.f == 0.0)
    constant = Value::make_float(0.0);
  p.constant = std::move(constant);
  p.operand_type = std::move(operand);
  return p;
}

inline Predicate make_type_test(std::string record_name, Type operand) {
  Predicate p;
  p.form = PredForm::TypeTest;
  p.record_name = std::move(record_name);
  p.operand_type = std::move(operand);
  return p;
}

namespace detail {

inline int value_class(const Value& v) {
  switch (v.kind) {
    case ValueKind::Null: return 0;
    case ValueKind::Bool: return 1;
    case ValueKind::Int: return 2;
    case ValueKind::Float: return 3;
    case ValueKind::String: return 4;
    case ValueKind::Array: return 5;
    case ValueKind::Record: return 6;
    case ValueKind::Unavailable: return 7;
  }
  return 8;
}

// Total order over constant values, used only to fix a canonical ordering.
inline int compare_const(const Value& a, const Value& b) {
  int ca = value_class(a), cb = value_class(b);
  if (ca != cb) return ca < cb ? -1 : 1;
  switch (a.kind) {
    case ValueKind::Null:
      return 0;
    case ValueKind::Bool:
      return a.b == b.b ? 0 : (!a.b ? -1 : 1);
    case ValueKind::Int:
      return a.i == b.i ? 0 : (a.i < b.i ? -1 : 1);
    case ValueKind::Float: {
      bool na = std::isnan(a.f), nb = std::isnan(b.f);
      if (na || nb) return na == nb ? 0 : (nb ? -1 : 1);  // NaN sorts last
      return a.f == b.f ? 0 : (a.f < b.f ? -1 : 1);
    }
    case ValueKind::String:
      return a.s.compare(b.s) < 0 ? -1 : (a.s == b.s ? 0 : 1);
    default: {
      std::string sa = value_to_string(a), sb = value_to_string(b);
      return sa.compare(sb) < 0 ? -1 : (sa == sb ? 0 : 1);
    }
  }
}

}  // namespace detail

inline int pred_compare(const Predicate& a, const Predicate& b) {
  int c = std::string_view(pred_form_mnemonic(a.form))
              .compare(pred_form_mnemonic(b.form));
  if (c != 0) return c < 0 ? -1 : 1;
  std::string ta = type_name(a.operand_type), tb = type_name(b.operand_type);
  if (ta != tb) return ta < tb ? -1 : 1;
  if (a.form == PredForm::TypeTest) {
    if (a.record_name != b.record_name)
      return a.record_name < b.record_name ? -1 : 1;
    return 0;
  }
  return detail::compare_const(a.constant, b.constant);
}

inline bool pred_less(const Predicate& a, const Predicate& b) {
  return pred_compare(a, b) < 0;
}

inline bool pred_equal(const Predicate& a, const Predicate& b) {
  return pred_compare(a, b) == 0;
}

// Literal expression denoting a constant value.
inline ExprPtr value_to_expr(const Value& v) {
  switch (v.kind) {
    case ValueKind::Int: {
      auto e = make_expr(ExprKind::IntLit);
      e->int_val = v.i;
      e->type = Type::int_();
      return e;
    }
    case ValueKind::Float: {
      auto e = make_expr(ExprKind::FloatLit);
      e->float_val = v.f;
      e->type = Type::float_();
      return e;
    }
    case ValueKind::Bool: {
      auto e = make_expr(ExprKind::BoolLit);
      e->bool_val = v.b;
      e->type = Type::bool_();
      return e;
    }
    case ValueKind::String: {
      auto e = make_expr(ExprKind::StringLit);
      e->str_val = v.s;
      e->type = Type::string_();
      return e;
    }
    case ValueKind::Null: {
      auto e = make_expr(ExprKind::NullLit);
      e->type = Type::null_();
      return e;
    }
    case ValueKind::Array: {
      auto e = make_expr(ExprKind::ArrayLit);
      for (const auto& elem : *v.array) e->args.push_back(value_to_expr(elem));
      if (!e->args.empty()) e->type = Type::array(e->args.front()->type);
      return e;
    }
    case ValueKind::Record: {
      auto e = make_expr(ExprKind::RecordMake);
      e->name = v.record->record_name;
      e->field_names = v.record->field_names;
      for (const auto& f : v.record->fields) e->args.push_back(value_to_expr(f));
      e->type = Type::record(v.record->record_name);
      return e;
    }
    case ValueKind::Unavailable:
      break;
  }
  auto e = make_expr(ExprKind::NullLit);
  e->type = Type::null_();
  return e;
}

// Human-readable form, e.g. "> 24", "== MIN_INT", "is Complex".
inline std::string pred_display(const Predicate& p) {
  switch (p.form) {
    case PredForm::EqConst: return "== " + print_expr(*value_to_expr(p.constant));
    case PredForm::EqualsConst:
      return "equals " + print_expr(*value_to_expr(p.constant));
    case PredForm::TypeTest: return "is " + p.record_name;
    case PredForm::Lt: return "< " + print_expr(*value_to_expr(p.constant));
    case PredForm::Le: return "<= " + print_expr(*value_to_expr(p.constant));
    case PredForm::Gt: return "> " + print_expr(*value_to_expr(p.constant));
    case PredForm::Ge: return ">= " + print_expr(*value_to_expr(p.constant));
  }
  return "";
}

// Evaluate a predicate on a runtime value. Equality forms use structural
// equality; ordered comparisons require matching numeric kinds; everything
// is false on Unavailable.
inline bool eval_predicate(const Predicate& p, const Value& v) {
  auto ordered = [&](auto cmp) {
    const Value& c = p.constant;
    if (v.kind == ValueKind::Int && c.kind == ValueKind::Int)
      return cmp(v.i, c.i);
    if (v.kind == ValueKind::Float && c.kind == ValueKind::Float)
      return cmp(v.f, c.f);
    return false;
  };
  switch (p.form) {
    case PredForm::EqConst:
    case PredForm::EqualsConst:
      if (v.kind == ValueKind::Unavailable) return false;
      return values_equal(v, p.constant);
    case PredForm::TypeTest:
      return v.kind == ValueKind::Record && v.record &&
             v.record->record_name == p.record_name;
    case PredForm::Lt:
      return ordered([](auto x, auto y) { return x < y; });
    case PredForm::Le:
      return ordered([](auto x, auto y) { return x <= y; });
    case PredForm::Gt:
      return ordered([](auto x, auto y) { return x > y; });
    case PredForm::Ge:
      return ordered([](auto x, auto y) { return x >= y; });
  }
  return false;
}

// Build the condition `<ref> <pred>` as an expression.
inline ExprPtr realize_predicate(const Predicate& p, const Expr& ref) {
  auto lhs = clone_expr(ref);
  auto bin = [&](const char* op) {
    auto e = make_expr(ExprKind::Binary);
    e->name = op;
    e->args.push_back(std::move(lhs));
    e->args.push_back(value_to_expr(p.constant));
    e->type = Type::bool_();
    return e;
  };
  switch (p.form) {
    case PredForm::EqConst: return bin("==");
    case PredForm::EqualsConst: {
      auto e = make_expr(ExprKind::Call);
      e->name = "equals";
      e->args.push_back(std::move(lhs));
      e->args.push_back(value_to_expr(p.constant));
      e->type = Type::bool_();
      return e;
    }
    case PredForm::TypeTest: {
      auto e = make_expr(ExprKind::Is);
      e->name = p.record_name;
      e->args.push_back(std::move(lhs));
      e->type = Type::bool_();
      return e;
    }
    case PredForm::Lt: return bin("<");
    case PredForm::Le: return bin("<=");
    case PredForm::Gt: return bin(">");
    case PredForm::Ge: return bin(">=");
  }
  return bin("==");
}

// ---------------------------------------------------------------------------
// Constant folding (mirrors runtime semantics; anything that could throw or
// touch runtime state is not a constant)

inline std::optional<Value> fold_constant(const Expr& e,
                                          const Program* prog = nullptr) {
  using K = ExprKind;
  auto fold = [&](const Expr& x) { return fold_constant(x, prog); };
  switch (e.kind) {
    case K::IntLit: return Value::make_int(e.int_val);
    case K::FloatLit: return Value::make_float(e.float_val);
    case K::BoolLit: return Value::make_bool(e.bool_val);
    case K::StringLit: return Value::make_string(e.str_val);
    case K::NullLit: return Value::make_null();
    case K::ArrayLit: {
      std::vector<Value> elems;
      for (const auto& a : e.args) {
        auto v = fold(*a);
        if (!v) return std::nullopt;
        elems.push_back(std::move(*v));
      }
      return Value::make_array(std::move(elems));
    }
    case K::RecordMake: {
      if (!prog) return std::nullopt;
      const RecordDecl* decl = prog->find_record(e.name);
      if (!decl) return std::nullopt;
      std::map<std::string, Value> by_name;
      for (size_t i = 0; i < e.args.size(); ++i) {
        auto v = fold(*e.args[i]);
        if (!v) return std::nullopt;
        by_name[e.field_names[i]] = std::move(*v);
      }
      auto rec = std::make_shared<RecordValue>();
      rec->record_name = e.name;
      for (const auto& f : decl->fields) {
        auto it = by_name.find(f.name);
        if (it == by_name.end()) return std::nullopt;
        rec->field_names.push_back(f.name);
        rec->fields.push_back(std::move(it->second));
      }
      return Value::make_record(std::move(rec));
    }
    case K::Unary: {
      auto v = fold(*e.args[0]);
      if (!v) return std::nullopt;
      if (e.name == "-") {
        if (v->kind == ValueKind::Int) return Value::make_int(wrap_sub(0, v->i));
        if (v->kind == ValueKind::Float) return Value::make_float(-v->f);
        return std::nullopt;
      }
      if (e.name == "!") {
        if (v->kind == ValueKind::Bool) return Value::make_bool(!v->b);
        return std::nullopt;
      }
      return std::nullopt;
    }
    case K::Binary: {
      const std::string& op = e.name;
      if (op == "&&" || op == "||") {
        auto l = fold(*e.args[0]);
        if (!l || l->kind != ValueKind::Bool) return std::nullopt;
        // Short-circuit exactly as the runtime does.
        if (op == "&&" && !l->b) return Value::make_bool(false);
        if (op == "||" && l->b) return Value::make_bool(true);
        auto r = fold(*e.args[1]);
        if (!r || r->kind != ValueKind::Bool) return std::nullopt;
        return Value::make_bool(r->b);
      }
      auto l = fold(*e.args[0]);
      if (!l) return std::nullopt;
      auto r = fold(*e.args[1]);
      if (!r) return std::nullopt;
      if (op == "==" || op == "!=") {
        bool eq;
        if (l->kind == ValueKind::Float && r->kind == ValueKind::Float)
          eq = l->f == r->f;  // IEEE semantics, same as the runtime
        else if (l->kind != r->kind)
          eq = false;
        else
          eq = values_equal(*l, *r);
        return Value::make_bool(op == "==" ? eq : !eq);
      }
      if (l->kind == ValueKind::Int && r->kind == ValueKind::Int) {
        std::int64_t x = l->i, y = r->i;
        constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
        if (op == "+") return Value::make_int(wrap_add(x, y));
        if (op == "-") return Value::make_int(wrap_sub(x, y));
        if (op == "*") return Value::make_int(wrap_mul(x, y));
        if (op == "/") {
          if (y == 0) return std::nullopt;  // would throw at runtime
          if (x == kMin && y == -1) return Value::make_int(x);
          return Value::make_int(x / y);
        }
        if (op == "%") {
          if (y == 0) return std::nullopt;
          if (x == kMin && y == -1) return Value::make_int(0);
          return Value::make_int(x % y);
        }
        if (op == "<") return Value::make_bool(x < y);
        if (op == "<=") return Value::make_bool(x <= y);
        if (op == ">") return Value::make_bool(x > y);
        if (op == ">=") return Value::make_bool(x >= y);
        return std::nullopt;
      }
      if (l->kind == ValueKind::Float && r->kind == ValueKind::Float) {
        double x = l->f, y = r->f;
        if (op == "+") return Value::make_float(x + y);
        if (op == "-") return Value::make_float(x - y);
        if (op == "*") return Value::make_float(x * y);
        if (op == "/") return Value::make_float(x / y);
        if (op == "<") return Value::make_bool(x < y);
        if (op == "<=") return Value::make_bool(x <= y);
        if (op == ">") return Value::make_bool(x > y);
        if (op == ">=") return Value::make_bool(x >= y);
        return std::nullopt;
      }
      return std::nullopt;
    }
    case K::Call: {
      if (e.name == "equals" && e.args.size() == 2) {
        auto l = fold(*e.args[0]);
        auto r = fold(*e.args[1]);
        if (!l || !r) return std::nullopt;
        return Value::make_bool(values_equal(*l, *r));
      }
      if (e.name == "starts_with" && e.args.size() == 2) {
        auto l = fold(*e.args[0]);
        auto r = fold(*e.args[1]);
        if (!l || !r) return std::nullopt;
        if (l->kind != ValueKind::String || r->kind != ValueKind::String)
          return std::nullopt;  // null would throw at runtime
        return Value::make_bool(l->s.rfind(r->s, 0) == 0);
      }
      if (e.name == "length" && e.args.size() == 1) {
        auto v = fold(*e.args[0]);
        if (!v || v->kind != ValueKind::Array) return std::nullopt;
        return Value::make_int(static_cast<std::int64_t>(v->array->size()));
      }
      return std::nullopt;  // user functions are not constants
    }
    case K::Index: {
      auto arr = fold(*e.args[0]);
      auto idx = fold(*e.args[1]);
      if (!arr || !idx || arr->kind != ValueKind::Array ||
          idx->kind != ValueKind::Int)
        return std::nullopt;
      if (idx->i < 0 ||
          static_cast<std::uint64_t>(idx->i) >= arr->array->size())
        return std::nullopt;  // would throw at runtime
      return (*arr->array)[static_cast<size_t>(idx->i)];
    }
    case K::Field: {
      auto rec = fold(*e.args[0]);
      if (!rec || rec->kind != ValueKind::Record) return std::nullopt;
      for (size_t i = 0; i < rec->record->field_names.size(); ++i)
        if (rec->record->field_names[i] == e.name)
          return rec->record->fields[i];
      return std::nullopt;
    }
    case K::Is: {
      auto v = fold(*e.args[0]);
      if (!v) return std::nullopt;
      if (v->kind == ValueKind::Null) return Value::make_bool(false);
      if (v->kind == ValueKind::Record)
        return Value::make_bool(v->record->record_name == e.name);
      return std::nullopt;
    }
    case K::Var:
      return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Predicate extraction from conditions

namespace detail {

inline bool is_var_ref(const Expr& e, const std::string& var) {
  return e.kind == ExprKind::Var && e.name == var;
}

inline void pred_extract_into(const Expr& e, const std::string& var,
                              const Type& var_type, const Program* prog,
                              std::vector<Predicate>& out) {
  using K = ExprKind;
  if (e.kind == K::Binary && (e.name == "&&" || e.name == "||")) {
    pred_extract_into(*e.args[0], var, var_type, prog, out);
    pred_extract_into(*e.args[1], var, var_type, prog, out);
    return;
  }
  if (e.kind == K::Unary && e.name == "!") {
    pred_extract_into(*e.args[0], var, var_type, prog, out);
    return;
  }
  if (e.kind == K::Is && e.args.size() == 1 && is_var_ref(*e.args[0], var)) {
    out.push_back(make_type_test(e.name, var_type));
    return;
  }
  if (e.kind == K::Call && e.name == "equals" && e.args.size() == 2) {
    const Expr* comparand = nullptr;
    if (is_var_ref(*e.args[0], var)) comparand = e.args[1].get();
    else if (is_var_ref(*e.args[1], var)) comparand = e.args[0].get();
    if (comparand) {
      if (auto c = fold_constant(*comparand, prog))
        out.push_back(
            make_predicate(PredForm::EqualsConst, std::move(*c), var_type));
    }
    return;
  }
  if (e.kind != K::Binary || e.args.size() != 2) return;
  bool lvar = is_var_ref(*e.args[0], var);
  bool rvar = is_var_ref(*e.args[1], var);
  if (lvar == rvar) return;  // need the bare variable on exactly one side
  std::string op = e.name;
  if (rvar) {  // mirror `v OP x` into `x OP' v`
    if (op == "<") op = ">";
    else if (op == "<=") op = ">=";
    else if (op == ">") op = "<";
    else if (op == ">=") op = "<=";
  }
  auto c = fold_constant(rvar ? *e.args[0] : *e.args[1], prog);
  if (!c) return;
  if (op == "==") {
    out.push_back(make_predicate(PredForm::EqConst, std::move(*c), var_type));
    return;
  }
  if (op == "!=") return;  // inequalities contribute nothing
  auto emit = [&](PredForm f, Value v) {
    out.push_back(make_predicate(f, std::move(v), var_type));
  };
  if (var_type.kind == TypeKind::Int && c->kind == ValueKind::Int) {
    std::int64_t v = c->i;
    constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
    constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
    // Integer bounds fold <= into < (and >= into >) at the adjacent
    // constant; forms that would overflow are dropped.
    if (op == "<" || op == ">=") {
      emit(PredForm::Lt, Value::make_int(v));
      if (v != kMin) emit(PredForm::Gt, Value::make_int(v - 1));
    } else if (op == "<=" || op == ">") {
      if (v != kMax) emit(PredForm::Lt, Value::make_int(v + 1));
      emit(PredForm::Gt, Value::make_int(v));
    }
  } else if (var_type.kind == TypeKind::Float && c->kind == ValueKind::Float) {
    double v = c->f;
    if (op == "<" || op == ">=") {
      emit(PredForm::Lt, Value::make_float(v));
      emit(PredForm::Ge, Value::make_float(v));
    } else if (op == "<=" || op == ">") {
      emit(PredForm::Le, Value::make_float(v));
      emit(PredForm::Gt, Value::make_float(v));
    }
  }
}

}  // namespace detail

// Predicates suggested by a condition over the single variable `var`. Both
// branches of a comparison are represented: each ordered atom contributes
// the predicate pair that splits the domain at its constant.
inline std::vector<Predicate> pred_extract(const Expr& cond,
                                           const std::string& var,
                                           const Type& var_type,
                                           const Program* prog = nullptr) {
  std::vector<Predicate> out;
  detail::pred_extract_into(cond, var, var_type, prog, out);
  return out;
}

// ---------------------------------------------------------------------------
// Corpus index

// Lookup context for mined statistics: operand type, variable name when it
// is meaningful (longer than two characters), and the enclosing method.
struct ContextKey {
  Type var_type;
  std::string var_name;  // empty when the name carries no information
  std::string method_name;
};

inline bool meaningful_name(const std::string& n) { return n.size() > 2; }

inline ContextKey make_context(const Type& t, const std::string& var_name,
                               const std::string& method_name) {
  return ContextKey{t, meaningful_name(var_name) ? var_name : "", method_name};
}

inline int context_compare(const ContextKey& a, const ContextKey& b) {
  std::string ta = type_name(a.var_type), tb = type_name(b.var_type);
  if (ta != tb) return ta < tb ? -1 : 1;
  if (a.var_name != b.var_name) return a.var_name < b.var_name ? -1 : 1;
  if (a.method_name != b.method_name)
    return a.method_name < b.method_name ? -1 : 1;
  return 0;
}

struct IndexRow {
  ContextKey ctx;
  Predicate pred;
  std::uint64_t count = 0;
  std::vector<std::string> provenance;  // "file#nodeId" per occurrence
};

struct CorpusIndex {
  std::vector<IndexRow> rows;
};

// Two identifiers are similar when their word decompositions share a word.
inline bool name_similar(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return false;
  auto wa = split_identifier(a);
  std::set<std::string> sa(wa.begin(), wa.end());
  for (const auto& w : split_identifier(b))
    if (sa.count(w)) return true;
  return false;
}

namespace detail {

struct CtxPredLess {
  bool operator()(const std::pair<ContextKey, Predicate>& a,
                  const std::pair<ContextKey, Predicate>& b) const {
    int c = context_compare(a.first, b.first);
    if (c != 0) return c < 0;
    return pred_less(a.second, b.second);
  }
};

using RowAccumulator =
    std::map<std::pair<ContextKey, Predicate>, IndexRow, CtxPredLess>;

inline void mine_program_into(const Program& prog, const std::string& source,
                              bool if_only, RowAccumulator& acc) {
  for (const auto& fn : prog.functions) {
    std::map<std::string, Type> var_types;
    for (const auto& p : fn.params) var_types[p.name] = p.type;
    for_each_statement(fn, [&](const Stmt& s) {
      if (s.kind == StmtKind::Let) var_types[s.name] = s.decl_type;
    });
    for_each_statement(fn, [&](const Stmt& s) {
      bool minable = s.kind == StmtKind::If ||
                     (s.kind == StmtKind::While && !if_only);
      if (!minable) return;
      auto vars = vars_of(*s.expr);
      std::set<std::string> distinct(vars.begin(), vars.end());
      if (distinct.size() != 1) return;
      const std::string& var = *distinct.begin();
      auto it = var_types.find(var);
      if (it == var_types.end()) return;
      auto preds = pred_extract(*s.expr, var, it->second, &prog);
      if (preds.empty()) return;
      ContextKey ctx = make_context(it->second, var, fn.name);
      std::string prov = source + "#" + std::to_string(s.id);
      for (auto& p : preds) {
        IndexRow& row = acc[{ctx, p}];
        if (row.count == 0) {
          row.ctx = ctx;
          row.pred = p;
        }
        ++row.count;
        row.provenance.push_back(prov);
      }
    });
  }
}

inline std::string path_basename(const std::string& path) {
  size_t pos = path.find_last_of('/');
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

}  // namespace detail

// Mine every `*.mini` file under `dir` (sorted by path). Files that fail to
// parse or check are skipped with a warning on `warnings`.
inline CorpusIndex build_index(const std::filesystem::path& dir,
                               bool if_only = false,
                               std::ostream* warnings = &std::cerr) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".mini")
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  detail::RowAccumulator acc;
  for (const auto& f : files) {
    std::ifstream in(f);
    std::stringstream ss;
    ss << in.rdbuf();
    Program prog;
    try {
      prog = parse_program(ss.str(), f.string());
      check_program(prog);
    } catch (const std::exception& ex) {
      if (warnings)
        *warnings << "warning: skipping corpus file " << f.string() << ": "
                  << ex.what() << "\n";
      continue;
    }
    detail::mine_program_into(prog, f.string(), if_only, acc);
  }
  CorpusIndex idx;
  for (auto& [key, row] : acc) idx.rows.push_back(std::move(row));
  if (idx.rows.empty()) throw EmptyCorpus{};
  return idx;
}

// ---------------------------------------------------------------------------
// Serialization (JSON lines, one row per line, canonical order)

namespace detail {

inline nlohmann::ordered_json value_to_json(const Value& v) {
  nlohmann::ordered_json j;
  switch (v.kind) {
    case ValueKind::Int:
      j["k"] = "int";
      j["v"] = std::to_string(v.i);  // exact 64-bit round trip
      break;
    case ValueKind::Float:
      j["k"] = "float";
      j["v"] = format_float(v.f);  // shortest round-trip text
      break;
    case ValueKind::Bool:
      j["k"] = "bool";
      j["v"] = v.b;
      break;
    case ValueKind::String:
      j["k"] = "string";
      j["v"] = v.s;
      break;
    case ValueKind::Null:
      j["k"] = "null";
      break;
    case ValueKind::Array: {
      j["k"] = "array";
      auto arr = nlohmann::ordered_json::array();
      for (const auto& e : *v.array) arr.push_back(value_to_json(e));
      j["v"] = std::move(arr);
      break;
    }
    case ValueKind::Record: {
      j["k"] = "record";
      j["name"] = v.record->record_name;
      auto names = nlohmann::ordered_json::array();
      auto vals = nlohmann::ordered_json::array();
      for (size_t i = 0; i < v.record->fields.size(); ++i) {
        names.push_back(v.record->field_names[i]);
        vals.push_back(value_to_json(v.record->fields[i]));
      }
      j["names"] = std::move(names);
      j["vals"] = std::move(vals);
      break;
    }
    case ValueKind::Unavailable:
      j["k"] = "unavailable";
      break;
  }
  return j;
}

inline Value value_from_json(const nlohmann::ordered_json& j) {
  std::string k = j.at("k").get<std::string>();
  if (k == "int") return Value::make_int(std::stoll(j.at("v").get<std::string>()));
  if (k == "float")
    return Value::make_float(std::strtod(j.at("v").get<std::string>().c_str(), nullptr));
  if (k == "bool") return Value::make_bool(j.at("v").get<bool>());
  if (k == "string") return Value::make_string(j.at("v").get<std::string>());
  if (k == "null") return Value::make_null();
  if (k == "array") {
    std::vector<Value> elems;
    for (const auto& e : j.at("v")) elems.push_back(value_from_json(e));
    return Value::make_array(std::move(elems));
  }
  if (k == "record") {
    auto rec = std::make_shared<RecordValue>();
    rec->record_name = j.at("name").get<std::string>();
    for (const auto& n : j.at("names"))
      rec->field_names.push_back(n.get<std::string>());
    for (const auto& v : j.at("vals")) rec->fields.push_back(value_from_json(v));
    return Value::make_record(std::move(rec));
  }
  throw std::runtime_error("bad constant in index: " + k);
}

inline std::string type_to_text(const Type& t) { return type_name(t); }

inline Type type_from_text(const std::string& s) {
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "[]") == 0)
    return Type::array(type_from_text(s.substr(0, s.size() - 2)));
  if (s == "int") return Type::int_();
  if (s == "float") return Type::float_();
  if (s == "bool") return Type::bool_();
  if (s == "string") return Type::string_();
  if (s == "null") return Type::null_();
  return Type::record(s);
}

inline nlohmann::ordered_json pred_to_json(const Predicate& p) {
  nlohmann::ordered_json j;
  j["form"] = pred_form_mnemonic(p.form);
  j["type"] = type_to_text(p.operand_type);
  if (p.form == PredForm::TypeTest)
    j["record"] = p.record_name;
  else
    j["const"] = value_to_json(p.constant);
  return j;
}

inline Predicate pred_from_json(const nlohmann::ordered_json& j) {
  std::string form = j.at("form").get<std::string>();
  Type t = type_from_text(j.at("type").get<std::string>());
  if (form == "is")
    return make_type_test(j.at("record").get<std::string>(), t);
  Value c = value_from_json(j.at("const"));
  PredForm f;
  if (form == "eq") f = PredForm::EqConst;
  else if (form == "equals") f = PredForm::EqualsConst;
  else if (form == "lt") f = PredForm::Lt;
  else if (form == "le") f = PredForm::Le;
  else if (form == "gt") f = PredForm::Gt;
  else if (form == "ge") f = PredForm::Ge;
  else throw std::runtime_error("bad predicate form in index: " + form);
  return make_predicate(f, std::move(c), std::move(t));
}

}  // namespace detail

inline std::string serialize_index(const CorpusIndex& idx) {
  std::string out;
  for (const auto& row : idx.rows) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json ctx;
    ctx["type"] = detail::type_to_text(row.ctx.var_type);
    if (!row.ctx.var_name.empty()) ctx["name"] = row.ctx.var_name;
    ctx["method"] = row.ctx.method_name;
    j["context"] = std::move(ctx);
    j["pred"] = detail::pred_to_json(row.pred);
    j["count"] = row.count;
    j["provenance"] = row.provenance;
    out += j.dump();
    out += '\n';
  }
  return out;
}

inline void save_index(const CorpusIndex& idx, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write index file: " + path.string());
  out << serialize_index(idx);
}

inline CorpusIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read index file: " + path.string());
  CorpusIndex idx;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(line);
      IndexRow row;
      const auto& ctx = j.at("context");
      row.ctx.var_type = detail::type_from_text(ctx.at("type").get<std::string>());
      if (ctx.contains("name")) row.ctx.var_name = ctx.at("name").get<std::string>();
      row.ctx.method_name = ctx.at("method").get<std::string>();
      row.pred = detail::pred_from_json(j.at("pred"));
      row.count = j.at("count").get<std::uint64_t>();
      for (const auto& p : j.at("provenance"))
        row.provenance.push_back(p.get<std::string>());
      idx.rows.push_back(std::move(row));
    } catch (const std::exception& ex) {
      throw std::runtime_error("malformed index at line " +
                               std::to_string(lineno) + ": " + ex.what());
    }
  }
  std::stable_sort(idx.rows.begin(), idx.rows.end(),
                   [](const IndexRow& a, const IndexRow& b) {
                     int c = context_compare(a.ctx, b.ctx);
                     if (c != 0) return c < 0;
                     return pred_less(a.pred, b.pred);
                   });
  return idx;
}

// ---------------------------------------------------------------------------
// Querying and ranking

// Aggregate counts for predicates whose context matches the target: same
// operand type, and similar variable names — or, when the target variable
// name carries no information, similar method names. Occurrences coming
// from `exclude_source` (same path or same basename) are not counted.
inline std::vector<std::pair<Predicate, std::uint64_t>> query_similar(
    const CorpusIndex& index, const ContextKey& target,
    const std::string& exclude_source = "") {
  std::string excl_base = detail::path_basename(exclude_source);
  auto excluded = [&](const std::string& prov) {
    if (exclude_source.empty()) return false;
    std::string file = prov.substr(0, prov.rfind('#'));
    return file == exclude_source ||
           detail::path_basename(file) == excl_base;
  };
  std::map<Predicate, std::uint64_t,
           bool (*)(const Predicate&, const Predicate&)>
      agg(&pred_less);
  for (const auto& row : index.rows) {
    if (!(row.ctx.var_type == target.var_type)) continue;
    bool match = target.var_name.empty()
                     ? name_similar(row.ctx.method_name, target.method_name)
                     : name_similar(row.ctx.var_name, target.var_name);
    if (!match) continue;
    std::uint64_t count = row.count;
    if (!exclude_source.empty()) {
      count = 0;
      for (const auto& prov : row.provenance)
        if (!excluded(prov)) ++count;
    }
    if (count == 0) continue;
    agg[row.pred] += count;
  }
  std::vector<std::pair<Predicate, std::uint64_t>> out;
  out.reserve(agg.size());
  for (auto& [p, c] : agg) out.emplace_back(p, c);
  return out;
}

// Domain fallbacks appended after mined predicates.
inline std::vector<Predicate> predefined_predicates(const Type& t) {
  std::vector<Predicate> out;
  switch (t.kind) {
    case TypeKind::Bool:
      out.push_back(make_predicate(PredForm::EqConst, Value::make_bool(true), t));
      out.push_back(make_predicate(PredForm::EqConst, Value::make_bool(false), t));
      break;
    case TypeKind::Int:
      out.push_back(make_predicate(
          PredForm::EqConst,
          Value::make_int(std::numeric_limits<std::int64_t>::min()), t));
      out.push_back(make_predicate(
          PredForm::EqConst,
          Value::make_int(std::numeric_limits<std::int64_t>::max()), t));
      break;
    case TypeKind::String:
    case TypeKind::Record:
    case TypeKind::Array:
      out.push_back(make_predicate(PredForm::EqConst, Value::make_null(), t));
      break;
    default:
      break;  // no fallbacks for float
  }
  return out;
}

// Mined predicates by frequency (descending, ties in canonical predicate
// order), truncated to top_k, then predefined fallbacks not already present.
inline std::vector<Predicate> rank_predicates(
    std::vector<std::pair<Predicate, std::uint64_t>> mined, const Type& t,
    int top_k = 20) {
  std::stable_sort(mined.begin(), mined.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return pred_less(a.first, b.first);
                   });
  if (top_k >= 0 && mined.size() > static_cast<size_t>(top_k))
    mined.resize(static_cast<size_t>(top_k));
  std::vector<Predicate> out;
  out.reserve(mined.size() + 2);
  for (auto& [p, c] : mined) out.push_back(std::move(p));
  for (auto& p : predefined_predicates(t)) {
    bool dup = std::any_of(out.begin(), out.end(), [&](const Predicate& q) {
      return pred_equal(p, q);
    });
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace acs
