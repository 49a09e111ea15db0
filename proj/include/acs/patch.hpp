#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "acs/ast.hpp"

namespace acs {

enum class PatchKind { InsertGuard, Widening, Narrowing };

inline const char* patch_kind_name(PatchKind k) {
  switch (k) {
    case PatchKind::InsertGuard: return "insert-guard";
    case PatchKind::Widening: return "widening";
    case PatchKind::Narrowing: return "narrowing";
  }
  return "";
}

// A candidate repair. For InsertGuard, `anchor` is the statement the guard
// is inserted before and `guard_body` is the guard's body (throw or
// prefix+return). For Widening/Narrowing, `anchor` is the if/while whose
// condition is rewritten to (c) || (c') or (c) && !(c') respectively.
struct Patch {
  PatchKind kind = PatchKind::InsertGuard;
  std::string method;
  NodeId anchor = kNoNode;
  ExprPtr condition;
  std::vector<StmtPtr> guard_body;
};

inline Patch clone_patch(const Patch& p) {
  Patch out;
  out.kind = p.kind;
  out.method = p.method;
  out.anchor = p.anchor;
  out.condition = p.condition ? clone_expr(*p.condition) : nullptr;
  for (const auto& s : p.guard_body) out.guard_body.push_back(clone_stmt(*s));
  return out;
}

namespace detail {

inline void max_id_expr(const Expr& e, NodeId& m) {
  if (e.id > m) m = e.id;
  for (const auto& a : e.args) max_id_expr(*a, m);
}

inline void max_id_stmt(const Stmt& s, NodeId& m) {
  if (s.id > m) m = s.id;
  if (s.expr) max_id_expr(*s.expr, m);
  if (s.expr2) max_id_expr(*s.expr2, m);
  for (const auto& b : s.block) max_id_stmt(*b, m);
  for (const auto& b : s.else_block) max_id_stmt(*b, m);
}

inline void fresh_id_expr(Expr& e, NodeId& next) {
  e.id = next++;
  for (auto& a : e.args) fresh_id_expr(*a, next);
}

inline void fresh_id_stmt(Stmt& s, NodeId& next) {
  s.id = next++;
  if (s.expr) fresh_id_expr(*s.expr, next);
  if (s.expr2) fresh_id_expr(*s.expr2, next);
  for (auto& b : s.block) fresh_id_stmt(*b, next);
  for (auto& b : s.else_block) fresh_id_stmt(*b, next);
}

// Locate the statement list containing `id` inside function bodies.
inline bool find_container(std::vector<StmtPtr>& list, NodeId id,
                           std::vector<StmtPtr>** out_list, size_t* out_idx) {
  for (size_t i = 0; i < list.size(); ++i) {
    if (list[i]->id == id) {
      *out_list = &list;
      *out_idx = i;
      return true;
    }
    if (find_container(list[i]->block, id, out_list, out_idx)) return true;
    if (find_container(list[i]->else_block, id, out_list, out_idx))
      return true;
  }
  return false;
}

}  // namespace detail

inline NodeId max_node_id(const Program& p) {
  NodeId m = 0;
  for (const auto& r : p.records)
    if (r.id > m) m = r.id;
  for (const auto& f : p.functions) {
    if (f.id > m) m = f.id;
    for (const auto& s : f.body) detail::max_id_stmt(*s, m);
  }
  for (const auto& t : p.tests) {
    if (t.id > m) m = t.id;
    for (const auto& s : t.body) detail::max_id_stmt(*s, m);
  }
  return m;
}

// Apply a patch to a copy of the program. Existing nodes keep their ids so
// anchors from earlier analyses stay valid when patches accumulate; nodes
// introduced by the patch get fresh ids above the current maximum.
inline Program apply_patch(const Program& prog, const Patch& patch) {
  Program out = clone_program(prog);
  NodeId next = max_node_id(out) + 1;
  std::vector<StmtPtr>* list = nullptr;
  size_t idx = 0;
  bool found = false;
  for (auto& f : out.functions)
    if (detail::find_container(f.body, patch.anchor, &list, &idx)) {
      found = true;
      break;
    }
  if (!found) throw std::runtime_error("patch anchor not found");

  if (patch.kind == PatchKind::InsertGuard) {
    auto guard = std::make_unique<Stmt>();
    guard->kind = StmtKind::If;
    guard->expr = clone_expr(*patch.condition);
    for (const auto& s : patch.guard_body)
      guard->block.push_back(clone_stmt(*s));
    detail::fresh_id_stmt(*guard, next);
    list->insert(list->begin() + static_cast<std::ptrdiff_t>(idx),
                 std::move(guard));
  } else {
    Stmt& target = *(*list)[idx];
    auto combined = std::make_unique<Expr>();
    combined->kind = ExprKind::Binary;
    if (patch.kind == PatchKind::Widening) {
      combined->name = "||";
      combined->args.push_back(std::move(target.expr));
      combined->args.push_back(clone_expr(*patch.condition));
      combined->id = next++;
      detail::fresh_id_expr(*combined->args[1], next);
    } else {
      combined->name = "&&";
      auto negated = std::make_unique<Expr>();
      negated->kind = ExprKind::Unary;
      negated->name = "!";
      negated->args.push_back(clone_expr(*patch.condition));
      combined->args.push_back(std::move(target.expr));
      combined->args.push_back(std::move(negated));
      combined->id = next++;
      combined->args[1]->id = next++;
      detail::fresh_id_expr(*combined->args[1]->args[0], next);
    }
    combined->type = Type::bool_();
    target.expr = std::move(combined);
  }
  return out;
}

}  // namespace acs
