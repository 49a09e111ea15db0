#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "acs/ast.hpp"
#include "acs/value.hpp"

namespace acs {

// A thrown MiniLang exception (user `throw` or a builtin error).
struct MiniThrow {
  std::string name;
};

// Resource-limit violations are distinct from MiniLang exceptions: they are
// not catchable by assert_throws and always abort the unit.
struct BudgetExceeded {};
struct DepthExceeded {};

inline constexpr std::uint64_t kStepBudget = 10'000'000;
inline constexpr std::uint64_t kGhostStepBudget = 100'000;
inline constexpr int kMaxCallDepth = 1000;

// One test unit: a single top-level assertion of a test case. Running the
// unit executes the test body from the top; assertions other than the chosen
// one are executed for coverage only (their outcomes are ignored and any
// exception they raise is swallowed), and the unit ends right after its own
// assertion.
struct UnitRef {
  size_t test_index = 0;
  size_t assert_ordinal = 0;  // 0-based among the test's top-level assertions
  NodeId assert_id = kNoNode;
  std::string test_name;
};

enum class Verdict { Pass, Fail, Error };

struct UnitResult {
  UnitRef unit;
  Verdict verdict = Verdict::Pass;
  std::string detail;
};

struct CondEval {
  NodeId stmt_id = kNoNode;
  std::uint64_t seq = 0;  // position in the global condition-evaluation order
  bool value = false;     // effective value (after any flip)
  bool flipped = false;
};

// Values of the planned snapshot expressions captured at one arrival
// (statement arrival or condition evaluation, depending on the plan mode).
struct Snapshot {
  std::uint64_t seq = 0;
  std::vector<Value> values;
  bool cond_value = false;  // original outcome (OnCondEval mode only)
  bool was_flip_target = false;
};

struct ExecutionTrace {
  std::set<NodeId> covered;
  std::map<NodeId, std::uint64_t> last_step;
  std::vector<CondEval> cond_evals;
  std::vector<Snapshot> snapshots;
  bool flip_applied = false;
  std::uint64_t steps = 0;
};

// Force the result of the `instance`-th evaluation (0-based, counted per
// statement) of the condition of statement `stmt_id` to its negation.
struct FlipSpec {
  NodeId stmt_id = kNoNode;
  std::uint64_t instance = 0;
};

enum class SnapshotMode { OnArrival, OnCondEval };

struct InstrumentationPlan {
  bool record_cond_evals = false;
  NodeId snapshot_stmt = kNoNode;
  SnapshotMode snapshot_mode = SnapshotMode::OnArrival;
  const std::vector<ExprPtr>* snapshot_exprs = nullptr;
  std::optional<FlipSpec> flip;
};

// Integer arithmetic wraps modulo 2^64 (two's complement).
inline std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}
inline std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                   static_cast<std::uint64_t>(b));
}
inline std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

inline std::vector<UnitRef> enumerate_units(const Program& p) {
  std::vector<UnitRef> units;
  for (size_t t = 0; t < p.tests.size(); ++t) {
    const auto& test = p.tests[t];
    for (size_t a = 0; a < test.assertions.size(); ++a)
      units.push_back(UnitRef{t, a, test.assertions[a], test.name});
  }
  return units;
}

class Interp {
 public:
  explicit Interp(const Program& p, std::uint64_t step_budget = kStepBudget)
      : prog_(p), step_budget_(step_budget) {
    for (const auto& f : p.functions) functions_[f.name] = &f;
    for (const auto& r : p.records) records_[r.name] = &r;
  }

  UnitResult run_unit(const UnitRef& unit, const InstrumentationPlan& plan,
                      ExecutionTrace* trace = nullptr) {
    plan_ = &plan;
    trace_ = trace;
    steps_ = 0;
    ghost_steps_ = 0;
    depth_ = 0;
    flip_count_ = 0;
    UnitResult res;
    res.unit = unit;
    const TestCase& test = prog_.tests[unit.test_index];
    Env env;
    cur_env_ = &env;
    size_t ordinal = 0;
    try {
      for (const auto& s : test.body) {
        bool is_assert = s->kind == StmtKind::AssertEq ||
                         s->kind == StmtKind::AssertThrows;
        if (!is_assert) {
          exec_stmt(*s, env);
          continue;
        }
        size_t my_ordinal = ordinal++;
        if (my_ordinal == unit.assert_ordinal) {
          run_assertion(*s, env, res);
          break;  // the unit ends at its own assertion
        }
        // Earlier assertion: execute for coverage, ignore the outcome.
        note_stmt(*s);
        try {
          if (s->kind == StmtKind::AssertEq) {
            eval(*s->expr, env);
            eval(*s->expr2, env);
          } else {
            eval(*s->expr, env);
          }
        } catch (const MiniThrow&) {
        }
      }
    } catch (const MiniThrow& t) {
      res.verdict = Verdict::Error;
      res.detail = "uncaught exception " + t.name;
    } catch (const BudgetExceeded&) {
      res.verdict = Verdict::Error;
      res.detail = "step budget exceeded";
    } catch (const DepthExceeded&) {
      res.verdict = Verdict::Error;
      res.detail = "call depth exceeded";
    }
    if (trace_) trace_->steps = steps_;
    plan_ = nullptr;
    trace_ = nullptr;
    return res;
  }

  std::vector<UnitResult> run_all(const InstrumentationPlan& plan = {}) {
    std::vector<UnitResult> out;
    for (const auto& u : enumerate_units(prog_))
      out.push_back(run_unit(u, plan));
    return out;
  }

 private:
  using Env = std::map<std::string, Value>;

  const Program& prog_;
  std::uint64_t step_budget_ = kStepBudget;
  std::map<std::string, const FunctionDecl*> functions_;
  std::map<std::string, const RecordDecl*> records_;
  const InstrumentationPlan* plan_ = nullptr;
  ExecutionTrace* trace_ = nullptr;
  std::uint64_t steps_ = 0;
  std::uint64_t ghost_steps_ = 0;
  int depth_ = 0;
  bool ghost_ = false;
  std::uint64_t flip_count_ = 0;  // evaluations seen of the flip target stmt

  void tick() {
    if (ghost_) {
      if (++ghost_steps_ > kGhostStepBudget) throw BudgetExceeded{};
    } else {
      if (++steps_ > step_budget_) throw BudgetExceeded{};
    }
  }

  void note_stmt(const Stmt& s) {
    tick();
    if (trace_ && !ghost_) {
      trace_->covered.insert(s.id);
      trace_->last_step[s.id] = steps_;
    }
    if (!ghost_ && plan_ && plan_->snapshot_stmt == s.id &&
        plan_->snapshot_mode == SnapshotMode::OnArrival)
      take_snapshot(false, false);
  }

  void take_snapshot(bool cond_value, bool was_flip_target) {
    if (!trace_ || !plan_ || !plan_->snapshot_exprs || !cur_env_) return;
    Snapshot snap;
    snap.seq = steps_;
    snap.cond_value = cond_value;
    snap.was_flip_target = was_flip_target;
    snap.values.reserve(plan_->snapshot_exprs->size());
    Env* env = cur_env_;
    for (const auto& e : *plan_->snapshot_exprs)
      snap.values.push_back(ghost_eval(*e, *env));
    trace_->snapshots.push_back(std::move(snap));
  }

  // Evaluate a snapshot expression without touching coverage, condition
  // records, or the main step budget; any failure yields Unavailable.
  Value ghost_eval(const Expr& e, Env& env) {
    bool saved = ghost_;
    ghost_ = true;
    ghost_steps_ = 0;
    Value v;
    try {
      v = eval(e, env);
    } catch (const MiniThrow&) {
      v = Value::make_unavailable();
    } catch (const BudgetExceeded&) {
      v = Value::make_unavailable();
    } catch (const DepthExceeded&) {
      v = Value::make_unavailable();
    }
    ghost_ = saved;
    return v;
  }

  void run_assertion(const Stmt& s, Env& env, UnitResult& res) {
    note_stmt(s);
    if (s.kind == StmtKind::AssertEq) {
      Value a, b;
      try {
        a = eval(*s.expr, env);
        b = eval(*s.expr2, env);
      } catch (const MiniThrow& t) {
        res.verdict = Verdict::Fail;
        res.detail = "uncaught exception " + t.name + " in assertion";
        return;
      }
      if (values_equal(a, b)) {
        res.verdict = Verdict::Pass;
      } else {
        res.verdict = Verdict::Fail;
        res.detail = "assert_eq mismatch: " + value_to_string(a) +
                     " vs " + value_to_string(b);
      }
    } else {
      try {
        eval(*s.expr, env);
        res.verdict = Verdict::Fail;
        res.detail = "expected exception " + s.name + ", none thrown";
      } catch (const MiniThrow& t) {
        if (t.name == s.name) {
          res.verdict = Verdict::Pass;
        } else {
          res.verdict = Verdict::Fail;
          res.detail = "expected exception " + s.name + ", got " + t.name;
        }
      }
    }
  }

  enum class Flow { Normal, Returned };

  Env* cur_env_ = nullptr;

  Flow exec_stmt(const Stmt& s, Env& env) {
    Env* saved_env = cur_env_;
    cur_env_ = &env;
    Flow flow = exec_stmt_inner(s, env);
    cur_env_ = saved_env;
    return flow;
  }

  Flow exec_stmt_inner(const Stmt& s, Env& env) {
    note_stmt(s);
    switch (s.kind) {
      case StmtKind::Let:
      case StmtKind::Assign:
        env[s.name] = eval(*s.expr, env);
        return Flow::Normal;
      case StmtKind::If: {
        bool c = eval_condition(s, env);
        const auto& branch = c ? s.block : s.else_block;
        for (const auto& b : branch)
          if (exec_stmt_inner(*b, env) == Flow::Returned) return Flow::Returned;
        return Flow::Normal;
      }
      case StmtKind::While: {
        while (eval_condition(s, env)) {
          for (const auto& b : s.block)
            if (exec_stmt_inner(*b, env) == Flow::Returned)
              return Flow::Returned;
        }
        return Flow::Normal;
      }
      case StmtKind::Return:
        ret_ = eval(*s.expr, env);
        return Flow::Returned;
      case StmtKind::Throw:
        throw MiniThrow{s.name};
      case StmtKind::ExprStmt:
        eval(*s.expr, env);
        return Flow::Normal;
      case StmtKind::AssertEq:
      case StmtKind::AssertThrows:
        // only reachable via exec of test bodies, which handles asserts
        return Flow::Normal;
    }
    return Flow::Normal;
  }

  bool eval_condition(const Stmt& s, Env& env) {
    bool snapshot_here = !ghost_ && plan_ && plan_->snapshot_stmt == s.id &&
                         plan_->snapshot_mode == SnapshotMode::OnCondEval;
    // Capture values before deciding the branch; condition evaluation
    // cannot mutate the environment.
    bool value = eval(*s.expr, env).b;
    bool flipped = false;
    if (!ghost_ && plan_ && plan_->flip && plan_->flip->stmt_id == s.id) {
      if (flip_count_ == plan_->flip->instance) {
        flipped = true;
        if (trace_) trace_->flip_applied = true;
      }
      ++flip_count_;
    }
    if (snapshot_here) take_snapshot(value, flipped);
    bool effective = flipped ? !value : value;
    if (!ghost_ && trace_ && plan_ && plan_->record_cond_evals)
      trace_->cond_evals.push_back(CondEval{s.id, steps_, effective, flipped});
    return effective;
  }

  Value ret_;

  Value call_function(const FunctionDecl& f, std::vector<Value> args) {
    if (++depth_ > kMaxCallDepth) {
      --depth_;
      throw DepthExceeded{};
    }
    Env env;
    for (size_t i = 0; i < f.params.size(); ++i)
      env[f.params[i].name] = std::move(args[i]);
    Flow flow = Flow::Normal;
    Env* saved_env = cur_env_;
    cur_env_ = &env;
    try {
      for (const auto& s : f.body) {
        flow = exec_stmt_inner(*s, env);
        if (flow == Flow::Returned) break;
      }
    } catch (...) {
      cur_env_ = saved_env;
      --depth_;
      throw;
    }
    cur_env_ = saved_env;
    --depth_;
    if (flow != Flow::Returned) throw MiniThrow{"NoReturn"};
    return ret_;
  }

  Value eval(const Expr& e, Env& env) {
    tick();
    switch (e.kind) {
      case ExprKind::IntLit: return Value::make_int(e.int_val);
      case ExprKind::FloatLit: return Value::make_float(e.float_val);
      case ExprKind::BoolLit: return Value::make_bool(e.bool_val);
      case ExprKind::StringLit: return Value::make_string(e.str_val);
      case ExprKind::NullLit: return Value::make_null();
      case ExprKind::ArrayLit: {
        std::vector<Value> elems;
        elems.reserve(e.args.size());
        for (const auto& a : e.args) elems.push_back(eval(*a, env));
        return Value::make_array(std::move(elems));
      }
      case ExprKind::Var: {
        auto it = env.find(e.name);
        if (it == env.end()) throw MiniThrow{"NullError"};  // unreachable
        return it->second;
      }
      case ExprKind::Unary: {
        if (e.name == "!") return Value::make_bool(!eval(*e.args[0], env).b);
        Value v = eval(*e.args[0], env);
        if (v.kind == ValueKind::Int) return Value::make_int(wrap_sub(0, v.i));
        return Value::make_float(-v.f);
      }
      case ExprKind::Binary: return eval_binary(e, env);
      case ExprKind::Call: return eval_call(e, env);
      case ExprKind::Index: {
        Value arr = eval(*e.args[0], env);
        Value idx = eval(*e.args[1], env);
        if (arr.kind == ValueKind::Null) throw MiniThrow{"NullError"};
        if (idx.i < 0 ||
            static_cast<std::uint64_t>(idx.i) >= arr.array->size())
          throw MiniThrow{"IndexError"};
        return (*arr.array)[static_cast<size_t>(idx.i)];
      }
      case ExprKind::Field: {
        Value rec = eval(*e.args[0], env);
        if (rec.kind == ValueKind::Null) throw MiniThrow{"NullError"};
        const auto& rv = *rec.record;
        for (size_t i = 0; i < rv.field_names.size(); ++i)
          if (rv.field_names[i] == e.name) return rv.fields[i];
        throw MiniThrow{"NullError"};  // unreachable after type checking
      }
      case ExprKind::RecordMake: {
        const RecordDecl* decl = records_.at(e.name);
        auto rv = std::make_shared<RecordValue>();
        rv->record_name = e.name;
        for (const auto& fld : decl->fields) {
          rv->field_names.push_back(fld.name);
          for (size_t i = 0; i < e.field_names.size(); ++i)
            if (e.field_names[i] == fld.name) {
              rv->fields.push_back(eval(*e.args[i], env));
              break;
            }
        }
        return Value::make_record(std::move(rv));
      }
      case ExprKind::Is: {
        Value v = eval(*e.args[0], env);
        return Value::make_bool(v.kind == ValueKind::Record &&
                                v.record->record_name == e.name);
      }
    }
    return Value::make_null();
  }

  Value eval_binary(const Expr& e, Env& env) {
    const std::string& op = e.name;
    if (op == "&&") {
      if (!eval(*e.args[0], env).b) return Value::make_bool(false);
      return Value::make_bool(eval(*e.args[1], env).b);
    }
    if (op == "||") {
      if (eval(*e.args[0], env).b) return Value::make_bool(true);
      return Value::make_bool(eval(*e.args[1], env).b);
    }
    Value a = eval(*e.args[0], env);
    Value b = eval(*e.args[1], env);
    if (op == "==" || op == "!=") {
      bool eq;
      if (a.kind == ValueKind::Float && b.kind == ValueKind::Float)
        eq = a.f == b.f;  // IEEE: NaN != NaN for the == operator
      else if (a.kind != b.kind)
        eq = false;  // nullable-vs-null comparisons
      else
        eq = values_equal(a, b);
      return Value::make_bool(op == "==" ? eq : !eq);
    }
    if (a.kind == ValueKind::Int) {
      std::int64_t x = a.i, y = b.i;
      if (op == "+") return Value::make_int(wrap_add(x, y));
      if (op == "-") return Value::make_int(wrap_sub(x, y));
      if (op == "*") return Value::make_int(wrap_mul(x, y));
      if (op == "/") {
        if (y == 0) throw MiniThrow{"DivByZero"};
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1)
          return Value::make_int(x);  // wraps to itself
        return Value::make_int(x / y);
      }
      if (op == "%") {
        if (y == 0) throw MiniThrow{"DivByZero"};
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1)
          return Value::make_int(0);
        return Value::make_int(x % y);
      }
      if (op == "<") return Value::make_bool(x < y);
      if (op == "<=") return Value::make_bool(x <= y);
      if (op == ">") return Value::make_bool(x > y);
      if (op == ">=") return Value::make_bool(x >= y);
    } else {
      double x = a.f, y = b.f;
      if (op == "+") return Value::make_float(x + y);
      if (op == "-") return Value::make_float(x - y);
      if (op == "*") return Value::make_float(x * y);
      if (op == "/") return Value::make_float(x / y);
      if (op == "<") return Value::make_bool(x < y);
      if (op == "<=") return Value::make_bool(x <= y);
      if (op == ">") return Value::make_bool(x > y);
      if (op == ">=") return Value::make_bool(x >= y);
    }
    return Value::make_null();
  }

  Value eval_call(const Expr& e, Env& env) {
    if (e.name == "equals") {
      Value a = eval(*e.args[0], env);
      Value b = eval(*e.args[1], env);
      return Value::make_bool(values_equal(a, b));
    }
    if (e.name == "starts_with") {
      Value s = eval(*e.args[0], env);
      Value p = eval(*e.args[1], env);
      if (s.kind == ValueKind::Null || p.kind == ValueKind::Null)
        throw MiniThrow{"NullError"};
      return Value::make_bool(s.s.rfind(p.s, 0) == 0);
    }
    if (e.name == "length") {
      Value a = eval(*e.args[0], env);
      if (a.kind == ValueKind::Null) throw MiniThrow{"NullError"};
      return Value::make_int(static_cast<std::int64_t>(a.array->size()));
    }
    std::vector<Value> args;
    args.reserve(e.args.size());
    for (const auto& a : e.args) args.push_back(eval(*a, env));
    return call_function(*functions_.at(e.name), std::move(args));
  }
};

struct SuiteOutcome {
  std::vector<UnitResult> results;
  bool all_pass = true;
};

inline SuiteOutcome run_suite(const Program& p,
                              std::uint64_t step_budget = kStepBudget) {
  Interp interp(p, step_budget);
  SuiteOutcome out;
  out.results = interp.run_all();
  for (const auto& r : out.results)
    if (r.verdict != Verdict::Pass) out.all_pass = false;
  return out;
}

}  // namespace acs
