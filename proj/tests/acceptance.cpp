// Acceptance suite: exercises the repair CLI end-to-end on the bundled
// defect fixtures and checks the analysis layers against independent
// reference implementations. Prints one PASS/FAIL line per criterion and
// exits with the number of failures.
//
// The CLI binary is taken from the ACS_BIN environment variable (set by the
// CTest wiring) or from argv[1].

#include <sys/wait.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "acs/check.hpp"
#include "acs/doc_filter.hpp"
#include "acs/engine.hpp"
#include "acs/fault_loc.hpp"
#include "acs/miner.hpp"
#include "acs/parser.hpp"
#include "acs/printer.hpp"
#include "acs/var_rank.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using namespace acs;

namespace {

constexpr std::int64_t kMinI = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kMaxI = std::numeric_limits<std::int64_t>::max();

std::string g_bin;
int g_failures = 0;
std::vector<std::string> g_details;

void report(int n, bool ok, const std::string& what) {
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << n << ": " << what
            << "\n";
  if (!ok) {
    ++g_failures;
    for (const auto& d : g_details) std::cout << "    " << d << "\n";
  }
  g_details.clear();
}

void detail(std::string s) { g_details.push_back(std::move(s)); }

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  long long wall_ms = 0;
};

RunResult run_cli(const std::string& args, const fs::path& stdout_file,
                  const fs::path& stderr_file) {
  std::string cmd = g_bin + " " + args + " > " + stdout_file.string() +
                    " 2> " + stderr_file.string();
  auto t0 = std::chrono::steady_clock::now();
  int raw = std::system(cmd.c_str());
  auto t1 = std::chrono::steady_clock::now();
  RunResult r;
  r.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  if (raw == -1)
    r.exit_code = -1;
  else if (WIFEXITED(raw))
    r.exit_code = WEXITSTATUS(raw);
  else
    r.exit_code = 128;
  return r;
}

// Writes one defect fixture (program, tests, corpus files) under dir.
struct Fixture {
  std::string name;
  const char* program;
  const char* tests;
  std::vector<std::pair<std::string, const char*>> corpus;
};

const std::vector<Fixture>& fixture_set() {
  static const std::vector<Fixture> fixtures = {
      {"lcm", fixtures::kLcmProgram, fixtures::kLcmTests,
       {{"hour.mini", fixtures::kHourCorpus}}},
      {"dot", fixtures::kDotProgram, fixtures::kDotTests,
       {{"sizes.mini", fixtures::kDotCorpusSizes},
        {"checks.mini", fixtures::kDotCorpusChecks}}},
      {"bracket", fixtures::kBracketProgram, fixtures::kBracketTests,
       {{"guards.mini", fixtures::kBracketCorpus}}},
      {"population", fixtures::kPopulationProgram, fixtures::kPopulationTests,
       {{"clamp.mini", fixtures::kPopulationCorpusClamp},
        {"success.mini", fixtures::kPopulationCorpusSuccess}}},
      {"classify", fixtures::kClassifyProgram, fixtures::kClassifyTests,
       {{"hour.mini", fixtures::kHourCorpus}}},
  };
  return fixtures;
}

fs::path materialize(const fs::path& root, const Fixture& f) {
  fs::path dir = root / f.name;
  fs::create_directories(dir / "corpus");
  fixtures::write_file(dir / "program.mini", f.program);
  fixtures::write_file(dir / "tests.mini", f.tests);
  for (const auto& [file, text] : f.corpus)
    fixtures::write_file(dir / "corpus" / file, text);
  return dir;
}

struct CliRepair {
  RunResult run;
  nlohmann::ordered_json report;
  std::string diff;
};

std::optional<CliRepair> cli_repair(const fs::path& dir,
                                    const std::string& tag = "") {
  fs::path report_file = dir / ("report" + tag + ".json");
  fs::path diff_file = dir / ("patch" + tag + ".diff");
  std::string args = "repair --program " + (dir / "program.mini").string() +
                     " --tests " + (dir / "tests.mini").string() +
                     " --corpus-dir " + (dir / "corpus").string() +
                     " --out-report " + report_file.string() + " --out-diff " +
                     diff_file.string() + " --stable-report";
  CliRepair out;
  out.run = run_cli(args, dir / ("stdout" + tag + ".txt"),
                    dir / ("stderr" + tag + ".txt"));
  if (!fs::exists(report_file)) {
    detail("no report file produced; stderr: " +
           read_file(dir / ("stderr" + tag + ".txt")));
    return std::nullopt;
  }
  try {
    out.report = nlohmann::ordered_json::parse(read_file(report_file));
  } catch (const std::exception& e) {
    detail(std::string("report is not valid JSON: ") + e.what());
    return std::nullopt;
  }
  if (fs::exists(diff_file)) out.diff = read_file(diff_file);
  return out;
}

std::string log_text(const nlohmann::ordered_json& report) {
  std::string out;
  if (report.contains("log"))
    for (const auto& line : report["log"]) out += line.get<std::string>() + "\n";
  return out;
}

bool expect(bool cond, const std::string& msg) {
  if (!cond) detail(msg);
  return cond;
}

// ---------------------------------------------------------------------------
// Criteria 1-4 and 9: end-to-end CLI repairs on the bundled defects.

void criterion_1(const fs::path& root) {
  bool ok = false;
  try {
    fs::path dir = materialize(root, fixture_set()[0]);
    auto r = cli_repair(dir);
    if (r) {
      ok = expect(r->run.exit_code == 0, "exit code " +
                                             std::to_string(r->run.exit_code)) &
           expect(r->run.wall_ms < 10000,
                  "took " + std::to_string(r->run.wall_ms) + " ms") &
           expect(r->diff.find("+    if (lcm == MIN_INT) {\n"
                               "+        throw ArithmeticException;\n"
                               "+    }\n"
                               "     return lcm;") != std::string::npos,
                  "guard block missing in diff:\n" + r->diff) &
           expect(r->report["patchFound"] == true, "patchFound not true") &
           expect(r->report["templateKind"] == "OracleThrowing",
                  "templateKind " + r->report["templateKind"].dump()) &
           expect(r->report["validationSummary"]["failedUnits"] == 0,
                  "failing units remain");
    }
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(1, ok,
         "overflow defect gets the exact MIN_INT throw guard, suite passes, "
         "under 10 s");
}

void criterion_2(const fs::path& root) {
  bool ok = false;
  try {
    fs::path dir = materialize(root, fixture_set()[1]);
    auto r = cli_repair(dir);
    if (r) {
      ok = expect(r->run.exit_code == 0, "exit code " +
                                             std::to_string(r->run.exit_code)) &
           expect(r->run.wall_ms < 10000,
                  "took " + std::to_string(r->run.wall_ms) + " ms") &
           expect(r->diff.find("+    if (len == 1) {\n"
                               "+        return a[0] * b[0];\n"
                               "+    }\n"
                               "     let neck: float = a[1] * b[1];") !=
                      std::string::npos,
                  "short-input guard missing in diff:\n" + r->diff) &
           expect(r->report["templateKind"] == "ValueReturning",
                  "templateKind " + r->report["templateKind"].dump()) &
           expect(r->report["phase"] == 1, "phase not 1") &
           expect(r->report["condition"] == "len == 1",
                  "condition " + r->report["condition"].dump()) &
           expect(r->report["validationSummary"]["failedUnits"] == 0,
                  "failing units remain");
    }
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(2, ok,
         "corpus-mined length==1 guard returns the one-element product via "
         "the functional oracle");
}

void criterion_3(const fs::path& root) {
  bool ok = false;
  try {
    fs::path dir = materialize(root, fixture_set()[2]);
    auto r = cli_repair(dir);
    if (r) {
      ok = expect(r->run.exit_code == 0, "exit code " +
                                             std::to_string(r->run.exit_code)) &
           expect(r->report["phase"] == 2, "phase not 2") &
           expect(r->report["templateKind"] == "Narrowing",
                  "templateKind " + r->report["templateKind"].dump()) &
           expect(r->report["condition"] ==
                      "(fa * fb >= 0.0) && !(fa * fb == 0.0)",
                  "condition " + r->report["condition"].dump()) &
           expect(r->diff.find("-    if (fa * fb >= 0.0) {") !=
                      std::string::npos,
                  "rewritten condition not in diff") &
           expect(r->diff.find(
                      "+    if ((fa * fb >= 0.0) && !(fa * fb == 0.0)) {") !=
                      std::string::npos,
                  "narrowed condition not in diff:\n" + r->diff) &
           expect(r->report["validationSummary"]["failedUnits"] == 0,
                  "failing units remain");
    }
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(3, ok,
         "sign-test underflow is repaired by narrowing with the mined "
         "== 0.0 exclusion");
}

void criterion_4(const fs::path& root) {
  bool ok = false;
  try {
    fs::path dir = materialize(root, fixture_set()[3]);
    auto r = cli_repair(dir);
    if (r) {
      size_t throws_added = 0;
      size_t pos = 0;
      while ((pos = r->diff.find("+        throw OutOfRangeException;", pos)) !=
             std::string::npos) {
        ++throws_added;
        pos += 1;
      }
      auto guards = r->report["guards"];
      ok = expect(r->run.exit_code == 0, "exit code " +
                                             std::to_string(r->run.exit_code)) &
           expect(guards.is_array() && guards.size() == 2,
                  "expected 2 guards, report: " + guards.dump()) &
           expect(guards.size() == 2 &&
                      guards[0]["condition"] == "elitismRate < 0.0",
                  "first guard: " + guards.dump()) &
           expect(guards.size() == 2 &&
                      guards[1]["condition"] == "elitismRate > 1.0",
                  "second guard: " + guards.dump()) &
           expect(throws_added == 2, "expected 2 inserted throws, saw " +
                                         std::to_string(throws_added)) &
           expect(r->report["validationSummary"]["failedUnits"] == 0,
                  "failing units remain");
    }
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(4, ok,
         "two range-guard throws accumulate across iterations and the whole "
         "suite passes");
}

void criterion_9(const fs::path& root) {
  bool ok = false;
  try {
    fs::path dir = materialize(root, fixture_set()[4]);
    auto r = cli_repair(dir);
    if (r) {
      std::string log = log_text(r->report);
      ok = expect(r->run.exit_code == 1, "exit code " +
                                             std::to_string(r->run.exit_code)) &
           expect(r->report["patchFound"] == false, "patchFound not false") &
           expect(log.find("level-cutoff discarded 1 candidate(s)") !=
                      std::string::npos,
                  "cutoff exhaustion not reported; log:\n" + log) &
           expect(log.find("no plausible patch found") != std::string::npos,
                  "final log line missing");
    }
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(9, ok,
         "negative control: the only separating variable sits past the level "
         "cutoff, no patch, cutoff noted");
}

// ---------------------------------------------------------------------------
// Criterion 5: dependency levels against a brute-force reference.

namespace genmodel {

// A randomly generated method body plus the ground-truth dependency edges
// recorded while generating it.
struct Generated {
  FunctionDecl fn;
  std::vector<std::string> vars;
  std::set<std::pair<std::string, std::string>> edges;  // dependent -> dependee
};

ExprPtr var_ref(const std::string& n) {
  auto e = make_expr(ExprKind::Var);
  e->name = n;
  return e;
}

ExprPtr sum_of(const std::vector<std::string>& vars) {
  if (vars.empty()) {
    auto one = make_expr(ExprKind::IntLit);
    one->int_val = 1;
    return one;
  }
  ExprPtr acc = var_ref(vars[0]);
  for (size_t i = 1; i < vars.size(); ++i) {
    auto bin = make_expr(ExprKind::Binary);
    bin->name = "+";
    bin->args.push_back(std::move(acc));
    bin->args.push_back(var_ref(vars[i]));
    acc = std::move(bin);
  }
  return acc;
}

Generated generate(std::mt19937& rng) {
  Generated g;
  std::uniform_int_distribution<int> var_count(2, 6);
  int k = var_count(rng);
  for (int i = 0; i < k; ++i) g.vars.push_back("v" + std::to_string(i));

  std::uniform_int_distribution<int> param_count(0, k - 1);
  int np = param_count(rng);
  g.fn.name = "gen";
  g.fn.return_type = Type::int_();
  for (int i = 0; i < np; ++i)
    g.fn.params.push_back(Param{g.vars[static_cast<size_t>(i)], Type::int_()});

  auto pick_subset = [&](const std::string& exclude) {
    std::vector<std::string> subset;
    for (const auto& v : g.vars) {
      if (v == exclude) continue;
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0)
        subset.push_back(v);
    }
    return subset;
  };

  // Declarations for the non-parameter variables; forward references are
  // fine for graph construction, which is purely name-based.
  for (int i = np; i < k; ++i) {
    const std::string& name = g.vars[static_cast<size_t>(i)];
    auto subset = pick_subset(name);
    auto let = make_stmt(StmtKind::Let);
    let->name = name;
    let->decl_type = Type::int_();
    let->expr = sum_of(subset);
    for (const auto& d : subset) g.edges.emplace(name, d);
    g.fn.body.push_back(std::move(let));
  }

  // A few assignments, some wrapped in a conditional to add control edges.
  std::uniform_int_distribution<int> assign_count(0, 4);
  int na = assign_count(rng);
  for (int i = 0; i < na && np < k; ++i) {
    std::uniform_int_distribution<int> target_pick(np, k - 1);
    const std::string& target = g.vars[static_cast<size_t>(target_pick(rng))];
    auto subset = pick_subset("");
    auto assign = make_stmt(StmtKind::Assign);
    assign->name = target;
    assign->expr = sum_of(subset);
    for (const auto& d : subset) g.edges.emplace(target, d);

    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
      std::uniform_int_distribution<int> cond_pick(0, k - 1);
      const std::string& cond_var = g.vars[static_cast<size_t>(cond_pick(rng))];
      auto wrapper = make_stmt(
          std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? StmtKind::If
                                                             : StmtKind::While);
      auto cond = make_expr(ExprKind::Binary);
      cond->name = "<";
      cond->args.push_back(var_ref(cond_var));
      auto zero = make_expr(ExprKind::IntLit);
      cond->args.push_back(std::move(zero));
      wrapper->expr = std::move(cond);
      wrapper->block.push_back(std::move(assign));
      g.edges.emplace(target, cond_var);
      g.fn.body.push_back(std::move(wrapper));
    } else {
      g.fn.body.push_back(std::move(assign));
    }
  }

  auto ret = make_stmt(StmtKind::Return);
  ret->expr = sum_of({g.vars[0]});
  g.fn.body.push_back(std::move(ret));
  return g;
}

// Reference computation: reachability closure -> strongly connected
// components -> longest-path levels on the condensation.
struct Reference {
  std::map<std::string, int> comp_of;
  std::map<std::string, int> level;
};

Reference reference_levels(const Generated& g) {
  const auto& vars = g.vars;
  int n = static_cast<int>(vars.size());
  auto idx = [&](const std::string& v) {
    for (int i = 0; i < n; ++i)
      if (vars[static_cast<size_t>(i)] == v) return i;
    return -1;
  };

  std::vector<std::vector<bool>> reach(
      static_cast<size_t>(n), std::vector<bool>(static_cast<size_t>(n)));
  for (const auto& [from, to] : g.edges)
    reach[static_cast<size_t>(idx(from))][static_cast<size_t>(idx(to))] = true;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[static_cast<size_t>(i)][static_cast<size_t>(m)] &&
            reach[static_cast<size_t>(m)][static_cast<size_t>(j)])
          reach[static_cast<size_t>(i)][static_cast<size_t>(j)] = true;

  Reference ref;
  std::vector<int> comp(static_cast<size_t>(n), -1);
  int comps = 0;
  for (int i = 0; i < n; ++i) {
    if (comp[static_cast<size_t>(i)] != -1) continue;
    comp[static_cast<size_t>(i)] = comps;
    for (int j = i + 1; j < n; ++j)
      if (comp[static_cast<size_t>(j)] == -1 &&
          reach[static_cast<size_t>(i)][static_cast<size_t>(j)] &&
          reach[static_cast<size_t>(j)][static_cast<size_t>(i)])
        comp[static_cast<size_t>(j)] = comps;
    ++comps;
  }

  // Component-level edges (dependent component -> dependee component).
  std::set<std::pair<int, int>> cedges;
  for (const auto& [from, to] : g.edges) {
    int a = comp[static_cast<size_t>(idx(from))];
    int b = comp[static_cast<size_t>(idx(to))];
    if (a != b) cedges.emplace(a, b);
  }

  // level(C) = 1 when nothing depends on C; otherwise one more than the
  // deepest dependent.
  std::vector<int> clevel(static_cast<size_t>(comps), 0);
  std::function<int(int)> level_of = [&](int c) -> int {
    if (clevel[static_cast<size_t>(c)] != 0)
      return clevel[static_cast<size_t>(c)];
    int best = 0;
    for (const auto& [a, b] : cedges)
      if (b == c) best = std::max(best, level_of(a));
    clevel[static_cast<size_t>(c)] = best + 1;
    return clevel[static_cast<size_t>(c)];
  };

  for (int i = 0; i < n; ++i) {
    ref.comp_of[vars[static_cast<size_t>(i)]] = comp[static_cast<size_t>(i)];
    ref.level[vars[static_cast<size_t>(i)]] =
        level_of(comp[static_cast<size_t>(i)]);
  }
  return ref;
}

}  // namespace genmodel

void criterion_5() {
  bool ok = false;
  try {
    // Worked example: result variable level 1, both parameters level 2,
    // ranked [lcm, a, b].
    Program chain = parse_program(fixtures::kChainProgram, "chain");
    check_program(chain);
    const FunctionDecl* fn = chain.find_function("lcm_units");
    auto g = build_dependency_graph(*fn);
    bool example_ok = g.level.at("lcm") == 1 && g.level.at("a") == 2 &&
                      g.level.at("b") == 2;
    auto collected = collect_candidates(*fn, fn->body.back()->id);
    auto ranked = rank_variables(std::move(collected.candidates), g);
    std::vector<std::string> order;
    for (const auto& c : ranked.ranked) order.push_back(c.text);
    example_ok = example_ok &&
                 order == std::vector<std::string>{"lcm", "a", "b"} &&
                 ranked.cutoff_discards == 0;
    if (!example_ok)
      detail("worked example mismatch: levels lcm=" +
             std::to_string(g.level.at("lcm")) + " a=" +
             std::to_string(g.level.at("a")) + " b=" +
             std::to_string(g.level.at("b")));

    // 100 random methods against the reference computation.
    std::mt19937 rng(20260823);
    int agree = 0;
    for (int trial = 0; trial < 100; ++trial) {
      auto gen = genmodel::generate(rng);
      auto ref = genmodel::reference_levels(gen);
      auto got = build_dependency_graph(gen.fn);
      bool match = true;
      for (const auto& v : gen.vars) {
        auto it = got.level.find(v);
        if (it == got.level.end() || it->second != ref.level.at(v)) {
          match = false;
          break;
        }
      }
      // The partition must agree pairwise as well.
      if (match) {
        auto comp_in_got = [&](const std::string& v) {
          for (size_t c = 0; c < got.sccs.size(); ++c)
            for (const auto& member : got.sccs[c])
              if (member == v) return static_cast<int>(c);
          return -1;
        };
        for (size_t i = 0; i < gen.vars.size() && match; ++i)
          for (size_t j = i + 1; j < gen.vars.size() && match; ++j) {
            bool same_ref = ref.comp_of.at(gen.vars[i]) ==
                            ref.comp_of.at(gen.vars[j]);
            bool same_got =
                comp_in_got(gen.vars[i]) == comp_in_got(gen.vars[j]);
            if (same_ref != same_got) match = false;
          }
      }
      if (match) ++agree;
      else if (g_details.size() < 3)
        detail("trial " + std::to_string(trial) + " disagrees");
    }
    if (agree != 100)
      detail("agreement " + std::to_string(agree) + "/100");
    ok = example_ok && agree == 100;
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(5, ok,
         "dependency levels: worked example exact and 100/100 agreement with "
         "the brute-force reference");
}

// ---------------------------------------------------------------------------
// Criterion 6: predicate extraction against an independent oracle.

namespace predmodel {

// Independent re-statement of the extraction rules. Only literal comparands
// are folded, which covers the whole grid below.
std::optional<Value> literal_value(const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit: return Value::make_int(e.int_val);
    case ExprKind::FloatLit: return Value::make_float(e.float_val);
    case ExprKind::BoolLit: return Value::make_bool(e.bool_val);
    case ExprKind::StringLit: return Value::make_string(e.str_val);
    case ExprKind::NullLit: return Value::make_null();
    default: return std::nullopt;
  }
}

void oracle_extract(const Expr& e, const std::string& var, const Type& t,
                    std::vector<Predicate>& out) {
  if (e.kind == ExprKind::Unary && e.name == "!") {
    oracle_extract(*e.args[0], var, t, out);
    return;
  }
  if (e.kind == ExprKind::Binary && (e.name == "&&" || e.name == "||")) {
    oracle_extract(*e.args[0], var, t, out);
    oracle_extract(*e.args[1], var, t, out);
    return;
  }
  if (e.kind == ExprKind::Is) {
    if (e.args[0]->kind == ExprKind::Var && e.args[0]->name == var)
      out.push_back(make_type_test(e.name, t));
    return;
  }
  if (e.kind == ExprKind::Call && e.name == "equals" && e.args.size() == 2) {
    for (int side = 0; side < 2; ++side) {
      const Expr& v = *e.args[static_cast<size_t>(side)];
      const Expr& c = *e.args[static_cast<size_t>(1 - side)];
      if (v.kind == ExprKind::Var && v.name == var) {
        if (auto lit = literal_value(c))
          out.push_back(make_predicate(PredForm::EqualsConst,
                                       std::move(*lit), t));
        return;
      }
    }
    return;
  }
  if (e.kind != ExprKind::Binary) return;
  std::string op = e.name;
  if (op != "==" && op != "!=" && op != "<" && op != "<=" && op != ">" &&
      op != ">=")
    return;

  const Expr* lhs = e.args[0].get();
  const Expr* rhs = e.args[1].get();
  bool var_left = lhs->kind == ExprKind::Var && lhs->name == var;
  bool var_right = rhs->kind == ExprKind::Var && rhs->name == var;
  if (var_left == var_right) return;  // need the variable on exactly one side
  const Expr* comparand = var_left ? rhs : lhs;
  auto lit = literal_value(*comparand);
  if (!lit) return;
  if (!var_left) {
    // Mirror `c OP x` into `x OP' c`.
    if (op == "<") op = ">";
    else if (op == ">") op = "<";
    else if (op == "<=") op = ">=";
    else if (op == ">=") op = "<=";
  }

  if (op == "!=") return;
  if (op == "==") {
    out.push_back(make_predicate(PredForm::EqConst, std::move(*lit), t));
    return;
  }
  if (lit->kind == ValueKind::Int) {
    std::int64_t v = lit->i;
    // x < v and x >= v share {Lt(v), Gt(v-1)}; x <= v and x > v share
    // {Lt(v+1), Gt(v)}. Bounds that would overflow are dropped.
    if (op == "<" || op == ">=") {
      if (v != kMinI)
        out.push_back(
            make_predicate(PredForm::Gt, Value::make_int(v - 1), t));
      out.push_back(make_predicate(PredForm::Lt, Value::make_int(v), t));
    } else {
      out.push_back(make_predicate(PredForm::Gt, Value::make_int(v), t));
      if (v != kMaxI)
        out.push_back(
            make_predicate(PredForm::Lt, Value::make_int(v + 1), t));
    }
    return;
  }
  if (lit->kind == ValueKind::Float) {
    double v = lit->f;
    if (op == "<" || op == ">=") {
      out.push_back(make_predicate(PredForm::Lt, Value::make_float(v), t));
      out.push_back(make_predicate(PredForm::Ge, Value::make_float(v), t));
    } else {
      out.push_back(make_predicate(PredForm::Le, Value::make_float(v), t));
      out.push_back(make_predicate(PredForm::Gt, Value::make_float(v), t));
    }
    return;
  }
}

std::vector<Predicate> oracle(const Expr& e, const std::string& var,
                              const Type& t) {
  std::vector<Predicate> out;
  oracle_extract(e, var, t, out);
  std::sort(out.begin(), out.end(), pred_less);
  return out;
}

ExprPtr atom_cmp(const std::string& op, bool var_left, const std::string& var,
                 ExprPtr lit) {
  auto cmp = make_expr(ExprKind::Binary);
  cmp->name = op;
  auto v = make_expr(ExprKind::Var);
  v->name = var;
  if (var_left) {
    cmp->args.push_back(std::move(v));
    cmp->args.push_back(std::move(lit));
  } else {
    cmp->args.push_back(std::move(lit));
    cmp->args.push_back(std::move(v));
  }
  return cmp;
}

ExprPtr int_lit(std::int64_t v) {
  auto e = make_expr(ExprKind::IntLit);
  e->int_val = v;
  return e;
}

ExprPtr float_lit(double v) {
  auto e = make_expr(ExprKind::FloatLit);
  e->float_val = v;
  return e;
}

ExprPtr combine(const std::string& op, ExprPtr a, ExprPtr b) {
  auto e = make_expr(ExprKind::Binary);
  e->name = op;
  e->args.push_back(std::move(a));
  e->args.push_back(std::move(b));
  return e;
}

ExprPtr negate(ExprPtr a) {
  auto e = make_expr(ExprKind::Unary);
  e->name = "!";
  e->args.push_back(std::move(a));
  return e;
}

}  // namespace predmodel

void criterion_6() {
  using namespace predmodel;
  bool ok = false;
  try {
    const Type ti = Type::int_();
    const Type tf = Type::float_();
    const std::vector<std::string> ops = {"==", "!=", "<", "<=", ">", ">="};

    std::vector<ExprPtr> int_atoms;
    const std::vector<std::int64_t> int_consts = {-2, -1, 0, 1, 2, kMinI,
                                                  kMaxI};
    for (const auto& op : ops)
      for (bool var_left : {true, false})
        for (std::int64_t c : int_consts)
          int_atoms.push_back(atom_cmp(op, var_left, "x", int_lit(c)));

    std::vector<ExprPtr> float_atoms;
    const std::vector<double> float_consts = {-0.5, 0.5, 0.0, -0.0};
    for (const auto& op : ops)
      for (bool var_left : {true, false})
        for (double c : float_consts)
          float_atoms.push_back(atom_cmp(op, var_left, "w", float_lit(c)));

    long long checked = 0, mismatches = 0;
    bool saw_int_le_ge = false;
    auto compare_one = [&](const Expr& cond, const std::string& var,
                           const Type& t) {
      auto got = pred_extract(cond, var, t);
      std::sort(got.begin(), got.end(), pred_less);
      auto want = oracle(cond, var, t);
      ++checked;
      bool equal = got.size() == want.size();
      for (size_t i = 0; equal && i < got.size(); ++i)
        equal = pred_equal(got[i], want[i]);
      if (!equal) {
        ++mismatches;
        if (g_details.size() < 3)
          detail("mismatch on: " + print_expr(cond) + " (got " +
                 std::to_string(got.size()) + " want " +
                 std::to_string(want.size()) + ")");
      }
      if (t.kind == TypeKind::Int)
        for (const auto& p : got)
          if (p.form == PredForm::Le || p.form == PredForm::Ge)
            saw_int_le_ge = true;
    };

    // Depth 1: all atoms, both operand orders.
    for (const auto& a : int_atoms) compare_one(*a, "x", ti);
    for (const auto& a : float_atoms) compare_one(*a, "w", tf);

    // Depth 2: negations and all binary pairs.
    for (const auto& a : int_atoms) {
      auto n = negate(clone_expr(*a));
      compare_one(*n, "x", ti);
    }
    for (const auto& a : int_atoms)
      for (const auto& b : int_atoms)
        for (const char* op : {"&&", "||"}) {
          auto c = combine(op, clone_expr(*a), clone_expr(*b));
          compare_one(*c, "x", ti);
        }
    for (const auto& a : float_atoms)
      for (const auto& b : float_atoms)
        for (const char* op : {"&&", "||"}) {
          auto c = combine(op, clone_expr(*a), clone_expr(*b));
          compare_one(*c, "w", tf);
        }

    // Depth 3 over a reduced constant grid: nested connectives on either
    // side plus double negation.
    std::vector<ExprPtr> small_atoms;
    for (const auto& op : ops)
      for (bool var_left : {true, false})
        for (std::int64_t c : {std::int64_t{-1}, std::int64_t{0},
                               std::int64_t{1}, kMinI, kMaxI})
          small_atoms.push_back(atom_cmp(op, var_left, "x", int_lit(c)));
    for (const auto& a : small_atoms)
      for (const auto& b : small_atoms) {
        auto nn = negate(negate(clone_expr(*a)));
        compare_one(*nn, "x", ti);
        auto nb = negate(combine("&&", clone_expr(*a), clone_expr(*b)));
        compare_one(*nb, "x", ti);
        for (const auto& c : small_atoms)
          for (const char* outer : {"&&", "||"})
            for (const char* inner : {"&&", "||"}) {
              auto left = combine(
                  outer, combine(inner, clone_expr(*a), clone_expr(*b)),
                  clone_expr(*c));
              compare_one(*left, "x", ti);
              auto right = combine(
                  outer, clone_expr(*a),
                  combine(inner, clone_expr(*b), clone_expr(*c)));
              compare_one(*right, "x", ti);
            }
      }

    // String, bool, and record atoms with nesting.
    {
      auto s_lit = make_expr(ExprKind::StringLit);
      s_lit->str_val = "a";
      auto eq1 = make_expr(ExprKind::Call);
      eq1->name = "equals";
      auto sv = make_expr(ExprKind::Var);
      sv->name = "s";
      eq1->args.push_back(std::move(sv));
      eq1->args.push_back(std::move(s_lit));
      compare_one(*eq1, "s", Type::string_());
      auto n1 = negate(std::move(eq1));
      compare_one(*n1, "s", Type::string_());

      auto is_e = make_expr(ExprKind::Is);
      is_e->name = "Rec";
      auto rv = make_expr(ExprKind::Var);
      rv->name = "r";
      is_e->args.push_back(std::move(rv));
      compare_one(*is_e, "r", Type::record("Rec"));

      for (bool bval : {true, false})
        for (bool var_left : {true, false})
          for (const char* op : {"==", "!="}) {
            auto bl = make_expr(ExprKind::BoolLit);
            bl->bool_val = bval;
            auto c = atom_cmp(op, var_left, "b", std::move(bl));
            compare_one(*c, "b", Type::bool_());
          }
    }

    if (saw_int_le_ge) detail("integer Le/Ge form produced");
    if (mismatches > 0)
      detail(std::to_string(mismatches) + " of " + std::to_string(checked) +
             " conditions disagree");
    ok = mismatches == 0 && !saw_int_le_ge && checked > 100000;
    if (checked <= 100000)
      detail("grid unexpectedly small: " + std::to_string(checked));
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(6, ok,
         "predicate extraction agrees with the independent oracle over the "
         "depth-3 grid; no NotEq, no integer Le/Ge");
}

// ---------------------------------------------------------------------------
// Criterion 7: suspiciousness formula values and monotonicity.

void criterion_7() {
  bool ok = false;
  try {
    const double eps = 1e-9;
    bool exact =
        std::abs(ochiai(1, 0, 1) - 1.0) < eps &&
        ochiai(0, 3, 2) == 0.0 &&
        std::abs(ochiai(1, 1, 1) - 1.0 / std::sqrt(2.0)) < eps;
    if (!exact) detail("pinned values off");

    std::mt19937 rng(977);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
      size_t ef = std::uniform_int_distribution<size_t>(1, 20)(rng);
      size_t ep = std::uniform_int_distribution<size_t>(0, 20)(rng);
      size_t f = std::uniform_int_distribution<size_t>(ef + 1, 40)(rng);
      double base = ochiai(ef, ep, f);
      if (!(ochiai(ef + 1, ep, f) > base)) ++bad;
      if (!(ochiai(ef, ep + 1, f) < base)) ++bad;
    }
    if (bad) detail(std::to_string(bad) + " monotonicity violations");
    ok = exact && bad == 0;
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(7, ok,
         "suspiciousness formula: pinned values exact, monotone over 1000 "
         "random coverage triples");
}

// ---------------------------------------------------------------------------
// Criterion 8: documentation-driven candidate filtering.

void criterion_8() {
  bool ok = false;
  try {
    Program p = parse_program(fixtures::kBoundedProgram, "bounded");
    check_program(p);
    const FunctionDecl* fn = p.find_function("bounded");
    auto collected = collect_candidates(*fn, fn->body.back()->id);
    std::vector<std::string> before;
    for (const auto& c : collected.candidates) before.push_back(c.text);
    bool have_all = before == std::vector<std::string>{
                                  "initial", "min", "max", "functionValue"};
    if (!have_all) detail("unexpected candidate set");

    auto tags = parse_doc(*fn->doc);
    auto kept = filter_for_exception(std::move(collected.candidates), tags,
                                     "OutOfRangeException");
    bool filtered = kept.size() == 1 && kept[0].text == "initial";
    if (!filtered) {
      std::string got;
      for (const auto& c : kept) got += c.text + " ";
      detail("filtered to: " + got);
    }

    // Without a doc comment nothing changes.
    auto again = collect_candidates(*fn, fn->body.back()->id);
    size_t n_again = again.candidates.size();
    auto unchanged = filter_for_exception(std::move(again.candidates), {},
                                          "OutOfRangeException");
    bool no_doc_ok = unchanged.size() == n_again;

    // A tag that names no variable changes nothing either.
    auto third = collect_candidates(*fn, fn->body.back()->id);
    size_t n_third = third.candidates.size();
    ThrowsTag vague;
    vague.exception_name = "OutOfRangeException";
    vague.condition_text = "the computation cannot settle.";
    auto still = filter_for_exception(std::move(third.candidates), {vague},
                                      "OutOfRangeException");
    bool vague_ok = still.size() == n_third;
    if (!no_doc_ok || !vague_ok) detail("no-op cases modified the set");

    ok = have_all && filtered && no_doc_ok && vague_ok;
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(8, ok,
         "@throws subject filtering keeps only the mentioned parameter; "
         "absent or variable-free docs are no-ops");
}

// ---------------------------------------------------------------------------
// Criterion 10: byte-identical output across repeated runs.

void criterion_10(const fs::path& root) {
  bool ok = false;
  try {
    fs::path base = root / "repeat";
    bool all_same = true;
    for (const auto& f : fixture_set()) {
      fs::path dir = materialize(base, f);
      auto first = cli_repair(dir, "_run1");
      auto second = cli_repair(dir, "_run2");
      if (!first || !second) {
        all_same = false;
        detail(f.name + ": run did not produce a report");
        continue;
      }
      std::string r1 = read_file(dir / "report_run1.json");
      std::string r2 = read_file(dir / "report_run2.json");
      std::string d1 = read_file(dir / "patch_run1.diff");
      std::string d2 = read_file(dir / "patch_run2.diff");
      if (r1 != r2 || r1.empty()) {
        all_same = false;
        detail(f.name + ": reports differ between runs");
      }
      if (d1 != d2) {
        all_same = false;
        detail(f.name + ": diffs differ between runs");
      }
      if (first->run.exit_code != second->run.exit_code) {
        all_same = false;
        detail(f.name + ": exit codes differ");
      }
    }
    ok = all_same;
  } catch (const std::exception& e) {
    detail(std::string("exception: ") + e.what());
  }
  report(10, ok,
         "two consecutive full runs produce byte-identical reports and "
         "diffs");
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("ACS_BIN")) g_bin = env;
  if (g_bin.empty() && argc > 1) g_bin = argv[1];
  if (g_bin.empty() || !fs::exists(g_bin)) {
    std::cerr << "acceptance: repair binary not found; set ACS_BIN or pass "
                 "the path as argv[1]\n";
    return 10;
  }

  fs::path root = fs::temp_directory_path() / "acs_acceptance";
  std::error_code ec;
  fs::remove_all(root, ec);
  fs::create_directories(root);

  criterion_1(root);
  criterion_2(root);
  criterion_3(root);
  criterion_4(root);
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9(root);
  criterion_10(root);

  if (g_failures == 0) {
    std::cout << "all criteria passed\n";
  } else {
    std::cout << g_failures << " criteria failed\n";
  }
  return g_failures;
}
