#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "acs/ast.hpp"
#include "acs/check.hpp"
#include "acs/config.hpp"
#include "acs/diff.hpp"
#include "acs/doc_filter.hpp"
#include "acs/fault_loc.hpp"
#include "acs/interp.hpp"
#include "acs/miner.hpp"
#include "acs/patch.hpp"
#include "acs/printer.hpp"
#include "acs/value.hpp"
#include "acs/var_rank.hpp"

namespace acs {

// ---------------------------------------------------------------------------
// Oracle extraction

// What a failing assertion tells us the method should have done.
struct OracleSpec {
  enum class Kind { Constant, Exception, Function, Unsupported };
  Kind kind = Kind::Unsupported;
  Value constant;              // Constant
  std::string exception_name;  // Exception
  std::vector<StmtPtr> prefix; // Function: setup statements, renamed
  ExprPtr return_expr;         // Function: value expression, renamed
  std::string reason;          // Unsupported
};

inline const char* oracle_kind_name(OracleSpec::Kind k) {
  switch (k) {
    case OracleSpec::Kind::Constant: return "constant";
    case OracleSpec::Kind::Exception: return "exception";
    case OracleSpec::Kind::Function: return "function";
    case OracleSpec::Kind::Unsupported: return "unsupported";
  }
  return "";
}

namespace detail {

inline size_t count_calls(const Expr& e, const std::string& callee) {
  size_t n = 0;
  for_each_expr_in(e, [&](const Expr& x) {
    if (x.kind == ExprKind::Call && x.name == callee) ++n;
  });
  return n;
}

inline const Expr* find_call(const Expr& e, const std::string& callee) {
  const Expr* found = nullptr;
  for_each_expr_in(e, [&](const Expr& x) {
    if (!found && x.kind == ExprKind::Call && x.name == callee) found = &x;
  });
  return found;
}

inline void assigned_names(const Stmt& s, std::set<std::string>& out) {
  if (s.kind == StmtKind::Let || s.kind == StmtKind::Assign) out.insert(s.name);
  for (const auto& b : s.block) assigned_names(*b, out);
  for (const auto& b : s.else_block) assigned_names(*b, out);
}

inline void referenced_names(const Stmt& s, std::set<std::string>& out) {
  auto add = [&](const ExprPtr& e) {
    if (!e) return;
    for (const auto& v : vars_of(*e)) out.insert(v);
  };
  add(s.expr);
  add(s.expr2);
  for (const auto& b : s.block) referenced_names(*b, out);
  for (const auto& b : s.else_block) referenced_names(*b, out);
}

inline void rename_vars(Expr& e, const std::map<std::string, std::string>& m) {
  if (e.kind == ExprKind::Var) {
    auto it = m.find(e.name);
    if (it != m.end()) e.name = it->second;
  }
  for (auto& a : e.args) rename_vars(*a, m);
}

inline void rename_stmt_vars(Stmt& s,
                             const std::map<std::string, std::string>& m) {
  if (s.kind == StmtKind::Let || s.kind == StmtKind::Assign) {
    auto it = m.find(s.name);
    if (it != m.end()) s.name = it->second;
  }
  if (s.expr) rename_vars(*s.expr, m);
  if (s.expr2) rename_vars(*s.expr2, m);
  for (auto& b : s.block) rename_stmt_vars(*b, m);
  for (auto& b : s.else_block) rename_stmt_vars(*b, m);
}

}  // namespace detail

// Statements among body[0..before_index) that feed the seed expression,
// found by a reverse scan: a statement is kept when it assigns a needed
// variable, and its references become needed in turn. Source order.
inline std::vector<const Stmt*> backward_slice(const std::vector<StmtPtr>& body,
                                               size_t before_index,
                                               const Expr& seed) {
  std::set<std::string> needed;
  for (const auto& v : vars_of(seed)) needed.insert(v);
  std::vector<const Stmt*> picked;
  for (size_t i = before_index; i-- > 0;) {
    const Stmt& s = *body[i];
    std::set<std::string> assigns;
    detail::assigned_names(s, assigns);
    bool hit = std::any_of(assigns.begin(), assigns.end(),
                           [&](const std::string& n) { return needed.count(n); });
    if (!hit) continue;
    picked.push_back(&s);
    std::set<std::string> refs;
    detail::referenced_names(s, refs);
    needed.insert(refs.begin(), refs.end());
  }
  std::reverse(picked.begin(), picked.end());
  return picked;
}

// Derive the oracle for a failing unit against a target method.
inline OracleSpec extract_oracle(const Program& prog, const UnitRef& unit,
                                 const FunctionDecl& method) {
  OracleSpec o;
  const TestCase& test = prog.tests[unit.test_index];
  size_t assert_pos = test.body.size();
  const Stmt* assertion = nullptr;
  for (size_t i = 0; i < test.body.size(); ++i)
    if (test.body[i]->id == unit.assert_id) {
      assert_pos = i;
      assertion = test.body[i].get();
      break;
    }
  if (!assertion) {
    o.reason = "assertion not found in test body";
    return o;
  }
  if (assertion->kind == StmtKind::AssertThrows) {
    o.kind = OracleSpec::Kind::Exception;
    o.exception_name = assertion->name;
    return o;
  }

  // assert_eq: exactly one side must contain exactly one call to the method.
  size_t n1 = detail::count_calls(*assertion->expr, method.name);
  size_t n2 = detail::count_calls(*assertion->expr2, method.name);
  if (n1 + n2 == 0) {
    o.reason = "assertion does not call the target method";
    return o;
  }
  if (n1 + n2 > 1) {
    o.reason = "assertion calls the target method more than once";
    return o;
  }
  const Expr* actual = n1 ? assertion->expr.get() : assertion->expr2.get();
  const Expr* expected = n1 ? assertion->expr2.get() : assertion->expr.get();

  if (!(expected->type == method.return_type)) {
    o.reason = "expected value type does not match the method return type";
    return o;
  }

  if (auto c = fold_constant(*expected, &prog)) {
    o.kind = OracleSpec::Kind::Constant;
    o.constant = std::move(*c);
    return o;
  }

  // Function-shaped oracle: rebuild the expected expression inside the
  // method, mapping call arguments onto formals.
  const Expr* call = detail::find_call(*actual, method.name);
  if (!call || call->args.size() != method.params.size()) {
    o.reason = "target call shape does not match the method signature";
    return o;
  }
  std::map<std::string, std::string> rename;
  for (size_t i = 0; i < call->args.size(); ++i) {
    const Expr& arg = *call->args[i];
    if (arg.kind != ExprKind::Var) {
      o.reason = "target call arguments are not plain variables";
      return o;
    }
    auto [it, inserted] = rename.emplace(arg.name, method.params[i].name);
    if (!inserted && it->second != method.params[i].name) {
      o.reason = "a variable is passed to two different parameters";
      return o;
    }
  }

  auto oracle_slice = backward_slice(test.body, assert_pos, *expected);
  std::set<NodeId> input_ids;
  for (const auto& arg : call->args)
    for (const Stmt* s : backward_slice(test.body, assert_pos, *arg))
      input_ids.insert(s->id);
  std::vector<const Stmt*> prefix_src;
  for (const Stmt* s : oracle_slice)
    if (!input_ids.count(s->id)) prefix_src.push_back(s);
  for (const Stmt* s : prefix_src)
    if (s->kind != StmtKind::Let && s->kind != StmtKind::Assign) {
      o.reason = "oracle setup is not straight-line code";
      return o;
    }

  // Freshen prefix-declared names that collide with names in the method.
  std::set<std::string> method_names;
  for (const auto& p : method.params) method_names.insert(p.name);
  for_each_statement(method, [&](const Stmt& s) {
    if (s.kind == StmtKind::Let) method_names.insert(s.name);
  });
  std::map<std::string, std::string> subst = rename;
  std::set<std::string> taken = method_names;
  for (const Stmt* s : prefix_src)
    if (s->kind == StmtKind::Let && !subst.count(s->name)) taken.insert(s->name);
  for (const Stmt* s : prefix_src) {
    if (s->kind != StmtKind::Let) continue;
    const std::string& n = s->name;
    if (!method_names.count(n)) continue;
    int k = 1;
    std::string candidate;
    do {
      candidate = n + "_" + std::to_string(k++);
    } while (taken.count(candidate));
    subst[n] = candidate;
    taken.insert(candidate);
  }

  std::vector<StmtPtr> prefix;
  for (const Stmt* s : prefix_src) {
    auto cl = clone_stmt(*s);
    detail::rename_stmt_vars(*cl, subst);
    prefix.push_back(std::move(cl));
  }
  auto ret = clone_expr(*expected);
  detail::rename_vars(*ret, subst);

  // The rebuilt code may only use the formals and its own definitions.
  std::set<std::string> defined;
  for (const auto& p : method.params) defined.insert(p.name);
  for (const auto& s : prefix) {
    std::set<std::string> refs;
    detail::referenced_names(*s, refs);
    for (const auto& v : refs)
      if (!defined.count(v)) {
        o.reason = "oracle depends on test state beyond the call inputs";
        return o;
      }
    if (s->kind == StmtKind::Assign && !defined.count(s->name)) {
      o.reason = "oracle depends on test state beyond the call inputs";
      return o;
    }
    if (s->kind == StmtKind::Let) defined.insert(s->name);
  }
  for (const auto& v : vars_of(*ret))
    if (!defined.count(v)) {
      o.reason = "oracle depends on test state beyond the call inputs";
      return o;
    }

  o.kind = OracleSpec::Kind::Function;
  o.prefix = std::move(prefix);
  o.return_expr = std::move(ret);
  return o;
}

// ---------------------------------------------------------------------------
// Anchors and labels

// Last statement of the method the unit executed, by execution step.
inline std::optional<NodeId> locate_anchor(const ExecutionTrace& trace,
                                           const FunctionDecl& method) {
  std::optional<NodeId> best;
  std::uint64_t best_step = 0;
  for_each_statement(method, [&](const Stmt& s) {
    auto it = trace.last_step.find(s.id);
    if (it == trace.last_step.end()) return;
    if (!best || it->second > best_step) {
      best = s.id;
      best_step = it->second;
    }
  });
  return best;
}

// Labels for guard insertion at `anchor`: the failing unit's final arrival
// must satisfy the synthesized condition (the guard must fire there), its
// earlier arrivals and every arrival in a passing unit must not. Arrivals
// in other failing units are left unconstrained.
inline std::vector<LabeledInstance> label_insertion_instances(
    const Program& p, const UnitRef& target, NodeId anchor,
    const std::vector<ExprPtr>& snapshot_exprs,
    std::uint64_t step_budget = kStepBudget) {
  InstrumentationPlan plan;
  plan.snapshot_stmt = anchor;
  plan.snapshot_mode = SnapshotMode::OnArrival;
  plan.snapshot_exprs = &snapshot_exprs;
  auto traces = trace_suite(p, plan, step_budget);
  std::vector<LabeledInstance> out;
  for (auto& t : traces) {
    bool is_target = t.unit.test_index == target.test_index &&
                     t.unit.assert_ordinal == target.assert_ordinal;
    if (is_failing(t.verdict) && !is_target) continue;
    auto& snaps = t.trace.snapshots;
    for (size_t i = 0; i < snaps.size(); ++i) {
      bool expected = is_target && i + 1 == snaps.size();
      out.push_back(LabeledInstance{std::move(snaps[i].values), expected});
    }
  }
  return out;
}

// Labels for condition modification: the flipped instance must satisfy the
// synthesized condition, and every other instance (any unit) whose original
// outcome matches the flipped instance's original outcome must not —
// otherwise the rewrite would change its branch too.
inline std::vector<LabeledInstance> label_modification_instances(
    const Program& p, const FlipCandidate& flip,
    const std::vector<ExprPtr>& snapshot_exprs,
    std::uint64_t step_budget = kStepBudget) {
  InstrumentationPlan plan;
  plan.snapshot_stmt = flip.site;
  plan.snapshot_mode = SnapshotMode::OnCondEval;
  plan.snapshot_exprs = &snapshot_exprs;
  auto traces = trace_suite(p, plan, step_budget);
  bool flip_original = flip.direction == FlipDirection::TrueToFalse;
  std::vector<LabeledInstance> out;
  for (auto& t : traces) {
    bool is_target = t.unit.test_index == flip.unit.test_index &&
                     t.unit.assert_ordinal == flip.unit.assert_ordinal;
    auto& snaps = t.trace.snapshots;
    for (size_t i = 0; i < snaps.size(); ++i) {
      if (is_target && i == flip.instance) {
        out.push_back(LabeledInstance{std::move(snaps[i].values), true});
      } else if (snaps[i].cond_value == flip_original) {
        out.push_back(LabeledInstance{std::move(snaps[i].values), false});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Condition synthesis

struct SynthPick {
  size_t cand_index = 0;  // into the ranked candidate list
  Predicate pred;
  int variable_rank = 0;   // 1-based
  int predicate_rank = 0;  // 1-based
};

// Walk candidates in rank order; for each, rank its mined predicates and
// return the first (candidate, predicate) pair consistent with every label.
inline std::optional<SynthPick> synthesize_condition(
    const std::vector<VarCandidate>& ranked,
    const std::vector<LabeledInstance>& instances, const CorpusIndex& index,
    const std::string& method_name, const std::string& program_source,
    int top_k = 20) {
  for (size_t vi = 0; vi < ranked.size(); ++vi) {
    const VarCandidate& cand = ranked[vi];
    ContextKey ctx = make_context(
        cand.static_type, cand.kind == CandKind::CondExpr ? "" : cand.name,
        method_name);
    auto mined = query_similar(index, ctx, program_source);
    auto preds = rank_predicates(std::move(mined), cand.static_type, top_k);
    for (size_t pi = 0; pi < preds.size(); ++pi) {
      bool ok = true;
      for (const auto& inst : instances) {
        if (eval_predicate(preds[pi], inst.values[cand.snap_index]) !=
            inst.expected) {
          ok = false;
          break;
        }
      }
      if (ok)
        return SynthPick{vi, preds[pi], static_cast<int>(vi) + 1,
                         static_cast<int>(pi) + 1};
    }
  }
  return std::nullopt;
}

// An inserted guard must look like a boundary check: equality forms always
// qualify; ordered comparisons only when the guard raises an exception.
// Type tests never qualify.
inline bool is_boundary_check(PredForm form, bool guard_is_throw) {
  switch (form) {
    case PredForm::EqConst:
    case PredForm::EqualsConst:
      return true;
    case PredForm::Lt:
    case PredForm::Le:
    case PredForm::Gt:
    case PredForm::Ge:
      return guard_is_throw;
    case PredForm::TypeTest:
      return false;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Repair driver

inline const char* template_name(PatchKind k, OracleSpec::Kind oracle) {
  if (k == PatchKind::Widening) return "Widening";
  if (k == PatchKind::Narrowing) return "Narrowing";
  return oracle == OracleSpec::Kind::Exception ? "OracleThrowing"
                                               : "ValueReturning";
}

struct GuardInfo {
  std::string method;
  std::string template_kind;
  std::string condition;
  NodeId anchor = kNoNode;
  std::string anchor_stmt;
  int variable_rank = 0;
  int predicate_rank = 0;
};

struct RepairResult {
  bool patch_found = false;
  int phase = 0;
  std::string template_kind;
  std::optional<Program> patched;
  std::string diff;
  nlohmann::ordered_json report;
};

namespace detail {

inline std::string first_line(const std::string& text) {
  std::string line = text.substr(0, text.find('\n'));
  size_t b = line.find_first_not_of(" \t");
  size_t e = line.find_last_not_of(" \t");
  if (b == std::string::npos) return "";
  return line.substr(b, e - b + 1);
}

inline std::string unit_label(const UnitRef& u) {
  return u.test_name + "#" + std::to_string(u.assert_ordinal);
}

}  // namespace detail

inline RepairResult repair(const Program& original, const CorpusIndex& index,
                           const Config& cfg = {}) {
  using Clock = std::chrono::steady_clock;
  auto t0 = Clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                                 t0)
        .count();
  };
  auto timed_out = [&] {
    return elapsed_ms() >= static_cast<long long>(cfg.timeout_seconds) * 1000;
  };

  RepairResult res;
  std::vector<std::string> log;
  std::vector<GuardInfo> guards;

  size_t base_passed = 0, base_failed = 0;
  {
    auto base = trace_suite(original, {}, cfg.step_budget);
    for (const auto& t : base)
      ++(is_failing(t.verdict) ? base_failed : base_passed);
  }

  auto finish = [&](const char* error) {
    nlohmann::ordered_json r;
    r["patchFound"] = res.patch_found;
    r["phase"] = res.phase;
    if (res.patch_found) {
      const GuardInfo& last = guards.back();
      r["templateKind"] = res.template_kind;
      r["anchor"] = {{"nodeId", last.anchor},
                     {"method", last.method},
                     {"stmt", last.anchor_stmt}};
      r["condition"] = last.condition;
      r["variableRank"] = last.variable_rank;
      r["predicateRank"] = last.predicate_rank;
    } else {
      r["templateKind"] = nullptr;
      r["anchor"] = nullptr;
      r["condition"] = nullptr;
      r["variableRank"] = nullptr;
      r["predicateRank"] = nullptr;
    }
    auto garr = nlohmann::ordered_json::array();
    if (res.patch_found)
      for (const auto& g : guards)
        garr.push_back({{"method", g.method},
                        {"anchorStmt", g.anchor_stmt},
                        {"templateKind", g.template_kind},
                        {"condition", g.condition},
                        {"variableRank", g.variable_rank},
                        {"predicateRank", g.predicate_rank}});
    r["guards"] = std::move(garr);
    r["elapsedMs"] = elapsed_ms();
    size_t vp = base_passed, vf = base_failed;
    if (res.patch_found) {
      vp = base_passed + base_failed;
      vf = 0;
    }
    r["validationSummary"] = {{"passedUnits", vp}, {"failedUnits", vf}};
    if (error) r["error"] = error;
    r["log"] = log;
    res.report = std::move(r);
    if (res.patched) res.diff = unified_diff(print_program(original),
                                             print_program(*res.patched),
                                             "a/" + original.source_name,
                                             "b/" + original.source_name);
    return std::move(res);
  };

  if (base_failed == 0) {
    log.push_back("no failing test units");
    return finish("NoFailingTest");
  }

  // ----- Phase 1: guard insertion, accumulating compatible guards --------
  Program work = clone_program(original);
  bool progressed = true;
  int iteration = 0;
  bool aborted = false;
  while (!aborted && progressed && iteration < cfg.max_iterations) {
    ++iteration;
    progressed = false;
    auto suite = trace_suite(work, {}, cfg.step_budget);
    std::vector<size_t> failing_idx;
    for (size_t i = 0; i < suite.size(); ++i)
      if (is_failing(suite[i].verdict)) failing_idx.push_back(i);
    if (failing_idx.empty()) break;  // handled by accumulation success below
    log.push_back("iteration " + std::to_string(iteration) + ": " +
                  std::to_string(failing_idx.size()) + " failing unit(s)");
    auto matrix = build_coverage_matrix(suite);
    auto methods = rank_methods(work, matrix);
    if (methods.size() > static_cast<size_t>(cfg.method_budget))
      methods.resize(static_cast<size_t>(cfg.method_budget));

    for (size_t fi = 0; fi < failing_idx.size() && !progressed && !aborted;
         ++fi) {
      const UnitTrace& unit = suite[failing_idx[fi]];
      std::string ulabel = detail::unit_label(unit.unit);
      if (timed_out()) { aborted = true; break; }
      for (const auto& ms : methods) {
        if (timed_out()) { aborted = true; break; }
        const FunctionDecl& m = *ms.fn;
        auto anchor = locate_anchor(unit.trace, m);
        if (!anchor) {
          log.push_back("unit " + ulabel + ": method " + m.name +
                        " not covered, skipping");
          continue;
        }
        OracleSpec oracle = extract_oracle(work, unit.unit, m);
        if (oracle.kind == OracleSpec::Kind::Unsupported) {
          log.push_back("unit " + ulabel + ": method " + m.name +
                        ": oracle unsupported (" + oracle.reason + ")");
          continue;
        }
        bool throwing = oracle.kind == OracleSpec::Kind::Exception;

        auto collected = collect_candidates(m, *anchor);
        if (collected.candidates.empty()) {
          log.push_back("unit " + ulabel + ": method " + m.name +
                        ": no candidates at anchor");
          continue;
        }
        auto snap_exprs = make_snapshot_exprs(collected.candidates);
        auto instances = label_insertion_instances(work, unit.unit, *anchor,
                                                   snap_exprs, cfg.step_budget);
        bool has_positive = std::any_of(
            instances.begin(), instances.end(),
            [](const LabeledInstance& li) { return li.expected; });
        if (!has_positive) {
          log.push_back("unit " + ulabel + ": method " + m.name +
                        ": failing run never reaches the anchor");
          continue;
        }
        auto cands =
            filter_by_runtime(std::move(collected.candidates), instances);
        if (throwing && m.doc)
          cands = filter_for_exception(std::move(cands), parse_doc(*m.doc),
                                       oracle.exception_name);
        auto graph = build_dependency_graph(m);
        auto rank = rank_variables(std::move(cands), graph, cfg.max_level);
        auto pick =
            synthesize_condition(rank.ranked, instances, index, m.name,
                                 original.source_name, cfg.top_k);
        if (!pick) {
          std::string msg = "unit " + ulabel + ": method " + m.name +
                            ": no separating condition";
          if (rank.cutoff_discards > 0)
            msg += " (level-cutoff discarded " +
                   std::to_string(rank.cutoff_discards) + " candidate(s))";
          log.push_back(std::move(msg));
          continue;
        }
        if (!is_boundary_check(pick->pred.form, throwing)) {
          log.push_back("unit " + ulabel + ": method " + m.name +
                        ": synthesized condition is not a boundary check (" +
                        pred_display(pick->pred) + ")");
          continue;
        }

        Patch patch;
        patch.kind = PatchKind::InsertGuard;
        patch.method = m.name;
        patch.anchor = *anchor;
        patch.condition =
            realize_predicate(pick->pred, *rank.ranked[pick->cand_index].ref);
        if (throwing) {
          auto thr = make_stmt(StmtKind::Throw);
          thr->name = oracle.exception_name;
          patch.guard_body.push_back(std::move(thr));
        } else if (oracle.kind == OracleSpec::Kind::Constant) {
          auto ret = make_stmt(StmtKind::Return);
          ret->expr = value_to_expr(oracle.constant);
          patch.guard_body.push_back(std::move(ret));
        } else {
          for (const auto& s : oracle.prefix)
            patch.guard_body.push_back(clone_stmt(*s));
          auto ret = make_stmt(StmtKind::Return);
          ret->expr = clone_expr(*oracle.return_expr);
          patch.guard_body.push_back(std::move(ret));
        }

        GuardInfo info;
        info.method = m.name;
        info.template_kind = template_name(patch.kind, oracle.kind);
        info.condition = print_expr(*patch.condition);
        info.anchor = *anchor;
        if (const Stmt* astmt = find_stmt(work, *anchor))
          info.anchor_stmt = detail::first_line(print_stmt(*astmt));
        info.variable_rank = pick->variable_rank;
        info.predicate_rank = pick->predicate_rank;

        Program cand_prog;
        try {
          cand_prog = apply_patch(work, patch);
          check_program(cand_prog);
        } catch (const std::exception& ex) {
          log.push_back("unit " + ulabel + ": method " + m.name +
                        ": patched program rejected (" + std::string(ex.what()) +
                        ")");
          continue;
        }
        auto validation = run_suite(cand_prog, cfg.step_budget);
        if (validation.all_pass) {
          guards.push_back(std::move(info));
          log.push_back("patch found: " + guards.back().template_kind +
                        " guard in " + m.name + " with condition " +
                        guards.back().condition);
          res.patch_found = true;
          res.phase = 1;
          res.template_kind = guards.back().template_kind;
          res.patched = std::move(cand_prog);
          return finish(nullptr);
        }
        // Accept the guard if it fixes this unit and breaks nothing that
        // passed before, then rerun the loop on the patched program.
        bool target_ok = false;
        bool regression = false;
        for (size_t i = 0; i < validation.results.size(); ++i) {
          bool was_pass = !is_failing(suite[i].verdict);
          bool now_pass = validation.results[i].verdict == Verdict::Pass;
          if (i == failing_idx[fi]) target_ok = now_pass;
          if (was_pass && !now_pass) regression = true;
        }
        if (target_ok && !regression) {
          guards.push_back(std::move(info));
          log.push_back("guard accepted in " + m.name + " with condition " +
                        guards.back().condition + "; repair continues");
          work = std::move(cand_prog);
          progressed = true;
          break;
        }
        log.push_back("unit " + ulabel + ": method " + m.name +
                      ": patch failed validation (target " +
                      (target_ok ? "fixed" : "still failing") +
                      (regression ? ", regressions introduced" : "") + ")");
      }
    }
  }
  if (aborted) {
    log.push_back("timeout exceeded, aborting");
    guards.clear();
    return finish("TimeoutExceeded");
  }
  guards.clear();  // phase 1 found no complete patch

  // ----- Phase 2: condition modification on the original program ---------
  log.push_back("phase 2: searching condition modifications");
  auto suite0 = trace_suite(original, {}, cfg.step_budget);
  std::vector<UnitRef> failing0;
  for (const auto& t : suite0)
    if (is_failing(t.verdict)) failing0.push_back(t.unit);
  auto matrix0 = build_coverage_matrix(suite0);
  auto methods0 = rank_methods(original, matrix0);
  if (methods0.size() > static_cast<size_t>(cfg.method_budget))
    methods0.resize(static_cast<size_t>(cfg.method_budget));

  for (const auto& ms : methods0) {
    const FunctionDecl& m = *ms.fn;
    for (const auto& unit : failing0) {
      if (timed_out()) {
        log.push_back("timeout exceeded, aborting");
        return finish("TimeoutExceeded");
      }
      auto flips = predicate_switch_search(original, unit, m, kFlipSearchBudget,
                                           cfg.step_budget);
      for (const auto& flip : flips) {
        const Stmt* site = find_stmt(original, flip.site);
        if (!site) continue;
        std::string slabel = detail::first_line(print_stmt(*site));
        log.push_back("unit " + detail::unit_label(unit) + ": method " +
                      m.name + ": flip makes it pass at \"" + slabel +
                      "\" instance " + std::to_string(flip.instance));
        auto collected = collect_candidates(m, flip.site, flip.site);
        if (collected.candidates.empty()) {
          log.push_back("method " + m.name + ": no candidates at condition");
          continue;
        }
        auto snap_exprs = make_snapshot_exprs(collected.candidates);
        auto instances = label_modification_instances(original, flip,
                                                      snap_exprs,
                                                      cfg.step_budget);
        auto cands =
            filter_by_runtime(std::move(collected.candidates), instances);
        auto graph = build_dependency_graph(m);
        auto rank = rank_variables(std::move(cands), graph, cfg.max_level);
        auto pick =
            synthesize_condition(rank.ranked, instances, index, m.name,
                                 original.source_name, cfg.top_k);
        if (!pick) {
          std::string msg =
              "method " + m.name + ": no separating condition for flip";
          if (rank.cutoff_discards > 0)
            msg += " (level-cutoff discarded " +
                   std::to_string(rank.cutoff_discards) + " candidate(s))";
          log.push_back(std::move(msg));
          continue;
        }
        Patch patch;
        patch.kind = flip.direction == FlipDirection::TrueToFalse
                         ? PatchKind::Narrowing
                         : PatchKind::Widening;
        patch.method = m.name;
        patch.anchor = flip.site;
        patch.condition =
            realize_predicate(pick->pred, *rank.ranked[pick->cand_index].ref);
        Program cand_prog;
        try {
          cand_prog = apply_patch(original, patch);
          check_program(cand_prog);
        } catch (const std::exception& ex) {
          log.push_back("method " + m.name + ": patched program rejected (" +
                        std::string(ex.what()) + ")");
          continue;
        }
        auto validation = run_suite(cand_prog, cfg.step_budget);
        if (!validation.all_pass) {
          log.push_back("method " + m.name + ": modification failed validation");
          continue;
        }
        GuardInfo info;
        info.method = m.name;
        info.template_kind =
            template_name(patch.kind, OracleSpec::Kind::Unsupported);
        const Stmt* patched_site = find_stmt(cand_prog, flip.site);
        info.condition = patched_site ? print_expr(*patched_site->expr)
                                      : print_expr(*patch.condition);
        info.anchor = flip.site;
        info.anchor_stmt = slabel;
        info.variable_rank = pick->variable_rank;
        info.predicate_rank = pick->predicate_rank;
        guards.push_back(std::move(info));
        log.push_back("patch found: " + guards.back().template_kind + " in " +
                      m.name + " rewriting condition to " +
                      guards.back().condition);
        res.patch_found = true;
        res.phase = 2;
        res.template_kind = guards.back().template_kind;
        res.patched = std::move(cand_prog);
        return finish(nullptr);
      }
    }
  }
  log.push_back("no plausible patch found");
  return finish(nullptr);
}

}  // namespace acs
