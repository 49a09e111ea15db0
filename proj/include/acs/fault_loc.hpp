#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "acs/ast.hpp"
#include "acs/interp.hpp"

namespace acs {

struct NoFailingTest : std::runtime_error {
  NoFailingTest() : std::runtime_error("no failing test unit") {}
};

inline bool is_failing(Verdict v) { return v != Verdict::Pass; }

// One executed test unit together with its instrumentation trace.
struct UnitTrace {
  UnitRef unit;
  Verdict verdict = Verdict::Pass;
  std::string detail;
  ExecutionTrace trace;
};

inline std::vector<UnitTrace> trace_suite(const Program& p,
                                          const InstrumentationPlan& plan = {},
                                          std::uint64_t step_budget = kStepBudget) {
  Interp interp(p, step_budget);
  std::vector<UnitTrace> out;
  for (const auto& u : enumerate_units(p)) {
    UnitTrace t;
    t.unit = u;
    UnitResult r = interp.run_unit(u, plan, &t.trace);
    t.verdict = r.verdict;
    t.detail = std::move(r.detail);
    out.push_back(std::move(t));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spectrum-based scoring

struct StatementScore {
  NodeId stmt = kNoNode;
  size_t ef = 0;  // failing units covering the statement
  size_t ep = 0;  // passing units covering the statement
  double score = 0.0;
};

struct CoverageMatrix {
  std::map<NodeId, StatementScore> by_stmt;
  size_t total_failed = 0;
  size_t total_passed = 0;
};

inline double ochiai(size_t ef, size_t ep, size_t failed_total) {
  if (ef == 0) return 0.0;
  return static_cast<double>(ef) /
         std::sqrt(static_cast<double>(failed_total) *
                   static_cast<double>(ef + ep));
}

inline CoverageMatrix build_coverage_matrix(const std::vector<UnitTrace>& traces) {
  CoverageMatrix m;
  for (const auto& t : traces)
    ++(is_failing(t.verdict) ? m.total_failed : m.total_passed);
  if (m.total_failed == 0) throw NoFailingTest{};
  for (const auto& t : traces) {
    bool failing = is_failing(t.verdict);
    for (NodeId id : t.trace.covered) {
      StatementScore& s = m.by_stmt[id];
      s.stmt = id;
      ++(failing ? s.ef : s.ep);
    }
  }
  for (auto& [id, s] : m.by_stmt) s.score = ochiai(s.ef, s.ep, m.total_failed);
  return m;
}

struct MethodScore {
  const FunctionDecl* fn = nullptr;
  double score = 0.0;
};

// Methods ordered by their maximum statement suspiciousness, descending;
// ties keep declaration order. The result is a permutation of p.functions.
inline std::vector<MethodScore> rank_methods(const Program& p,
                                             const CoverageMatrix& m) {
  std::vector<MethodScore> out;
  for (const auto& fn : p.functions) {
    double best = 0.0;
    for_each_statement(fn, [&](const Stmt& s) {
      auto it = m.by_stmt.find(s.id);
      if (it != m.by_stmt.end()) best = std::max(best, it->second.score);
    });
    out.push_back(MethodScore{&fn, best});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const MethodScore& a, const MethodScore& b) {
                     return a.score > b.score;
                   });
  return out;
}

// ---------------------------------------------------------------------------
// Predicate switching

// Re-run one unit forcing the `instance`-th evaluation of the condition at
// `site` to its negation. If the instance is never reached, the returned
// trace has flip_applied == false.
inline UnitTrace run_with_flip(const Program& p, const UnitRef& unit,
                               NodeId site, std::uint64_t instance,
                               std::uint64_t step_budget = kStepBudget) {
  InstrumentationPlan plan;
  plan.flip = FlipSpec{site, instance};
  Interp interp(p, step_budget);
  UnitTrace t;
  t.unit = unit;
  UnitResult r = interp.run_unit(unit, plan, &t.trace);
  t.verdict = r.verdict;
  t.detail = std::move(r.detail);
  return t;
}

enum class FlipDirection { TrueToFalse, FalseToTrue };

struct FlipCandidate {
  NodeId site = kNoNode;
  std::uint64_t instance = 0;  // per-site evaluation ordinal within the unit
  FlipDirection direction = FlipDirection::TrueToFalse;
  UnitRef unit;  // the failing unit this flip turns into a pass
};

inline constexpr size_t kFlipSearchBudget = 256;

// Probe every condition-evaluation instance of the method observed in the
// failing unit's run, in evaluation order, flipping one instance at a time.
// Instances whose flip makes the unit pass become candidates; the direction
// records the original (unflipped) outcome.
inline std::vector<FlipCandidate> predicate_switch_search(
    const Program& p, const UnitRef& failing_unit, const FunctionDecl& method,
    size_t budget = kFlipSearchBudget,
    std::uint64_t step_budget = kStepBudget) {
  std::set<NodeId> cond_sites;
  for_each_statement(method, [&](const Stmt& s) {
    if (s.kind == StmtKind::If || s.kind == StmtKind::While)
      cond_sites.insert(s.id);
  });
  std::vector<FlipCandidate> out;
  if (cond_sites.empty()) return out;

  InstrumentationPlan record;
  record.record_cond_evals = true;
  Interp interp(p, step_budget);
  ExecutionTrace ref;
  interp.run_unit(failing_unit, record, &ref);

  std::map<NodeId, std::uint64_t> next_ordinal;
  size_t examined = 0;
  for (const auto& ce : ref.cond_evals) {
    std::uint64_t ordinal = next_ordinal[ce.stmt_id]++;
    if (!cond_sites.count(ce.stmt_id)) continue;
    if (examined >= budget) break;
    ++examined;
    UnitTrace probe =
        run_with_flip(p, failing_unit, ce.stmt_id, ordinal, step_budget);
    if (!probe.trace.flip_applied) continue;
    if (probe.verdict == Verdict::Pass) {
      out.push_back(FlipCandidate{ce.stmt_id, ordinal,
                                  ce.value ? FlipDirection::TrueToFalse
                                           : FlipDirection::FalseToTrue,
                                  failing_unit});
    }
  }
  return out;
}

}  // namespace acs
