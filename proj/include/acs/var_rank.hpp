#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "acs/ast.hpp"
#include "acs/printer.hpp"
#include "acs/value.hpp"

namespace acs {

enum class CandKind { Param, Local, CondExpr };

// A repair ingredient available at the anchor site: a parameter, a local
// variable, or a pseudo-variable (composite sub-expression of a condition).
struct VarCandidate {
  CandKind kind = CandKind::Local;
  std::string name;  // variable name; empty for pseudo-variables
  std::string text;  // display form: the name, or the printed expression
  ExprPtr ref;       // expression that evaluates the candidate at the site
  Type static_type;
  NodeId decl_site = kNoNode;  // let stmt, function decl, or harvested cond stmt
  size_t collect_index = 0;    // position in the collected list
  size_t snap_index = 0;       // index into the snapshot expression vector
  int distance = 0;            // statement distance to the site
  int level = 0;               // dependency level (set by rank_variables)
};

namespace detail {

// Chain of (statement list, index) from the function body down to the
// statement with the given id; outermost first.
inline bool stmt_path(const std::vector<StmtPtr>& block, NodeId id,
                      std::vector<std::pair<const std::vector<StmtPtr>*, size_t>>& path) {
  for (size_t i = 0; i < block.size(); ++i) {
    if (block[i]->id == id) {
      path.emplace_back(&block, i);
      return true;
    }
    if (stmt_path(block[i]->block, id, path) ||
        stmt_path(block[i]->else_block, id, path)) {
      path.insert(path.begin(), {&block, i});
      return true;
    }
  }
  return false;
}

// 0-based pre-order index of every statement in the function, nested
// statements included.
inline std::map<NodeId, int> stmt_indices(const FunctionDecl& fn) {
  std::map<NodeId, int> idx;
  int n = 0;
  for_each_statement(fn, [&](const Stmt& s) { idx[s.id] = n++; });
  return idx;
}

inline size_t expr_node_count(const Expr& e) {
  size_t n = 0;
  detail::for_each_expr_in(e, [&](const Expr&) { ++n; });
  return n;
}

}  // namespace detail

struct CollectResult {
  std::vector<VarCandidate> candidates;
  int site_index = 0;  // pre-order index of the site statement
};

// Collect parameters, in-scope locals declared before the site, and
// pseudo-variables harvested from the method's if/while conditions.
// `excluded_condition` suppresses harvesting from one statement (used when
// the repair rewrites that statement's own condition).
inline CollectResult collect_candidates(const FunctionDecl& fn, NodeId site,
                                        NodeId excluded_condition = kNoNode) {
  CollectResult out;
  auto indices = detail::stmt_indices(fn);
  if (auto it = indices.find(site); it != indices.end())
    out.site_index = it->second;

  std::vector<std::pair<const std::vector<StmtPtr>*, size_t>> path;
  detail::stmt_path(fn.body, site, path);
  std::vector<const Stmt*> visible_lets;
  std::set<std::string> in_scope;
  for (const auto& p : fn.params) in_scope.insert(p.name);
  for (const auto& [list, idx] : path)
    for (size_t i = 0; i < idx; ++i)
      if ((*list)[i]->kind == StmtKind::Let) {
        visible_lets.push_back((*list)[i].get());
        in_scope.insert((*list)[i]->name);
      }

  size_t ci = 0;
  auto add = [&](VarCandidate c) {
    c.collect_index = ci;
    c.snap_index = ci;
    ++ci;
    out.candidates.push_back(std::move(c));
  };

  for (const auto& p : fn.params) {
    VarCandidate c;
    c.kind = CandKind::Param;
    c.name = c.text = p.name;
    c.static_type = p.type;
    c.decl_site = fn.id;
    c.distance = out.site_index + 1;
    auto v = make_expr(ExprKind::Var);
    v->name = p.name;
    v->type = p.type;
    c.ref = std::move(v);
    add(std::move(c));
  }

  for (const Stmt* let : visible_lets) {
    VarCandidate c;
    c.kind = CandKind::Local;
    c.name = c.text = let->name;
    c.static_type = let->decl_type;
    c.decl_site = let->id;
    c.distance = std::abs(out.site_index - indices[let->id]);
    auto v = make_expr(ExprKind::Var);
    v->name = let->name;
    v->type = let->decl_type;
    c.ref = std::move(v);
    add(std::move(c));
  }

  // Pseudo-variables: composite sub-expressions of int/float/bool type whose
  // variables are all in scope at the site. Deduplicated by printed text;
  // ordered by node count, then first occurrence.
  struct Harvested {
    std::string text;
    const Expr* expr;
    size_t nodes;
    int cond_index;
    size_t seq;
  };
  std::vector<Harvested> pool;
  std::set<std::string> seen;
  size_t seq = 0;
  for_each_statement(fn, [&](const Stmt& s) {
    if (s.kind != StmtKind::If && s.kind != StmtKind::While) return;
    if (s.id == excluded_condition) return;
    int cond_index = indices[s.id];
    detail::for_each_expr_in(*s.expr, [&](const Expr& e) {
      switch (e.kind) {
        case ExprKind::Var:
        case ExprKind::IntLit:
        case ExprKind::FloatLit:
        case ExprKind::BoolLit:
        case ExprKind::StringLit:
        case ExprKind::NullLit:
          return;  // not composite
        default:
          break;
      }
      TypeKind tk = e.type.kind;
      if (tk != TypeKind::Int && tk != TypeKind::Float && tk != TypeKind::Bool)
        return;
      auto vars = vars_of(e);
      if (vars.empty()) return;
      for (const auto& v : vars)
        if (!in_scope.count(v)) return;
      std::string text = print_expr(e);
      if (!seen.insert(text).second) return;
      pool.push_back(
          Harvested{std::move(text), &e, detail::expr_node_count(e),
                    cond_index, seq++});
    });
  });
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Harvested& a, const Harvested& b) {
                     if (a.nodes != b.nodes) return a.nodes < b.nodes;
                     return a.seq < b.seq;
                   });
  for (const auto& h : pool) {
    VarCandidate c;
    c.kind = CandKind::CondExpr;
    c.text = h.text;
    c.ref = clone_expr(*h.expr);
    c.static_type = h.expr->type;
    c.decl_site = kNoNode;
    c.distance = std::abs(out.site_index - h.cond_index);
    add(std::move(c));
  }
  return out;
}

// Expressions to snapshot at the site, aligned with candidate snap_index.
inline std::vector<ExprPtr> make_snapshot_exprs(
    const std::vector<VarCandidate>& cands) {
  std::vector<ExprPtr> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(clone_expr(*c.ref));
  return out;
}

// ---------------------------------------------------------------------------
// Dependency graph and levels

struct DepGraph {
  std::vector<std::string> order;                      // params, then lets
  std::map<std::string, std::set<std::string>> edges;  // dependent -> dependee
  std::map<std::string, int> level;                    // 1 = most dependent
  std::vector<std::vector<std::string>> sccs;
};

// Edges run from the assigned variable to every variable it depends on:
// variables of the assigned expression (data) and variables of every
// enclosing if/while condition (control).
inline DepGraph build_dependency_graph(const FunctionDecl& fn) {
  DepGraph g;
  std::set<std::string> nodes;
  for (const auto& p : fn.params) {
    g.order.push_back(p.name);
    nodes.insert(p.name);
  }
  for_each_statement(fn, [&](const Stmt& s) {
    if (s.kind == StmtKind::Let && !nodes.count(s.name)) {
      g.order.push_back(s.name);
      nodes.insert(s.name);
    }
  });
  for (const auto& n : g.order) g.edges[n];  // ensure every node appears

  std::vector<std::vector<std::string>> cond_stack;
  std::function<void(const std::vector<StmtPtr>&)> walk =
      [&](const std::vector<StmtPtr>& block) {
        for (const auto& sp : block) {
          const Stmt& s = *sp;
          if (s.kind == StmtKind::Let || s.kind == StmtKind::Assign) {
            auto& deps = g.edges[s.name];
            for (const auto& v : vars_of(*s.expr))
              if (nodes.count(v)) deps.insert(v);
            for (const auto& conds : cond_stack)
              for (const auto& v : conds) deps.insert(v);
          } else if (s.kind == StmtKind::If || s.kind == StmtKind::While) {
            std::vector<std::string> cv;
            for (const auto& v : vars_of(*s.expr))
              if (nodes.count(v)) cv.push_back(v);
            cond_stack.push_back(std::move(cv));
            walk(s.block);
            walk(s.else_block);
            cond_stack.pop_back();
          }
        }
      };
  walk(fn.body);

  // Tarjan's strongly connected components, visiting roots in declaration
  // order and neighbors in sorted order for determinism.
  std::map<std::string, int> index, lowlink, scc_of;
  std::vector<std::string> stack;
  std::set<std::string> on_stack;
  int next_index = 0;
  std::function<void(const std::string&)> strongconnect =
      [&](const std::string& v) {
        index[v] = lowlink[v] = next_index++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const auto& w : g.edges[v]) {
          if (!index.count(w)) {
            strongconnect(w);
            lowlink[v] = std::min(lowlink[v], lowlink[w]);
          } else if (on_stack.count(w)) {
            lowlink[v] = std::min(lowlink[v], index[w]);
          }
        }
        if (lowlink[v] == index[v]) {
          std::vector<std::string> comp;
          while (true) {
            std::string w = stack.back();
            stack.pop_back();
            on_stack.erase(w);
            comp.push_back(w);
            if (w == v) break;
          }
          std::sort(comp.begin(), comp.end());
          for (const auto& w : comp)
            scc_of[w] = static_cast<int>(g.sccs.size());
          g.sccs.push_back(std::move(comp));
        }
      };
  for (const auto& v : g.order)
    if (!index.count(v)) strongconnect(v);

  // Condense to a DAG and peel: level 1 holds components nothing else
  // depends on (no incoming cross-component edge) — the most dependent
  // variables; each peel round removes the current level.
  size_t nscc = g.sccs.size();
  std::vector<std::set<int>> out_edges(nscc);
  std::vector<int> indeg(nscc, 0);
  for (const auto& [from, deps] : g.edges)
    for (const auto& to : deps) {
      int a = scc_of[from], b = scc_of[to];
      if (a != b && out_edges[a].insert(b).second) ++indeg[b];
    }
  std::vector<int> scc_level(nscc, 0);
  std::vector<char> removed(nscc, 0);
  int level = 1;
  size_t assigned = 0;
  while (assigned < nscc) {
    std::vector<int> frontier;
    for (size_t i = 0; i < nscc; ++i)
      if (!removed[i] && indeg[i] == 0) frontier.push_back(static_cast<int>(i));
    if (frontier.empty()) break;  // unreachable: the condensation is acyclic
    for (int i : frontier) {
      scc_level[i] = level;
      removed[i] = 1;
      ++assigned;
      for (int j : out_edges[i]) --indeg[j];
    }
    ++level;
  }
  for (const auto& v : g.order) g.level[v] = scc_level[scc_of[v]];
  return g;
}

// ---------------------------------------------------------------------------
// Runtime filtering and ranking

// One snapshot of candidate values with the truth value a synthesized
// condition must take on it.
struct LabeledInstance {
  std::vector<Value> values;  // aligned with candidate snap_index
  bool expected = false;
};

// Drop candidates that cannot separate the instances: some pair with
// different labels has equal snapshot values.
inline std::vector<VarCandidate> filter_by_runtime(
    std::vector<VarCandidate> cands,
    const std::vector<LabeledInstance>& instances) {
  std::vector<VarCandidate> out;
  for (auto& c : cands) {
    bool conflict = false;
    for (size_t i = 0; i < instances.size() && !conflict; ++i)
      for (size_t j = i + 1; j < instances.size() && !conflict; ++j)
        if (instances[i].expected != instances[j].expected &&
            values_equal(instances[i].values[c.snap_index],
                         instances[j].values[c.snap_index]))
          conflict = true;
    if (!conflict) out.push_back(std::move(c));
  }
  return out;
}

struct RankResult {
  std::vector<VarCandidate> ranked;
  size_t cutoff_discards = 0;  // candidates dropped by the level cutoff
};

// Level of a candidate: its variable's level, or for a pseudo-variable the
// minimum level over its constituent variables (1 if none are tracked).
inline int candidate_level(const VarCandidate& c, const DepGraph& g) {
  if (c.kind != CandKind::CondExpr) {
    auto it = g.level.find(c.name);
    return it != g.level.end() ? it->second : 1;
  }
  int best = 0;
  for (const auto& v : vars_of(*c.ref)) {
    auto it = g.level.find(v);
    if (it == g.level.end()) continue;
    best = best == 0 ? it->second : std::min(best, it->second);
  }
  return best == 0 ? 1 : best;
}

// Order candidates by (level asc, distance asc, collection order); drop
// candidates beyond max_level and count them.
inline RankResult rank_variables(std::vector<VarCandidate> cands,
                                 const DepGraph& g, int max_level = 2) {
  RankResult out;
  for (auto& c : cands) c.level = candidate_level(c, g);
  for (auto& c : cands) {
    if (c.level > max_level) {
      ++out.cutoff_discards;
      continue;
    }
    out.ranked.push_back(std::move(c));
  }
  std::stable_sort(out.ranked.begin(), out.ranked.end(),
                   [](const VarCandidate& a, const VarCandidate& b) {
                     if (a.level != b.level) return a.level < b.level;
                     if (a.distance != b.distance) return a.distance < b.distance;
                     return a.collect_index < b.collect_index;
                   });
  return out;
}

}  // namespace acs
