// acs — automatic repair of MiniLang programs driven by failing tests.
//
// Subcommands:
//   repair     search for a patch that makes the whole test suite pass
//   index      mine a corpus of .mini files into a predicate index
//   localize   rank methods by suspiciousness for the failing tests
//   mine       print the predicates extracted from one file's conditions
//   run-tests  run the test suite and report per-unit verdicts
//   rank-vars  show the ranked repair candidates for the top failing unit

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "acs/check.hpp"
#include "acs/config.hpp"
#include "acs/engine.hpp"
#include "acs/fault_loc.hpp"
#include "acs/miner.hpp"
#include "acs/parser.hpp"
#include "acs/printer.hpp"
#include "acs/var_rank.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The program and its tests are parsed as one compilation unit; node ids and
// diagnostics are relative to the concatenated text. The program path names
// the unit.
acs::Program load_checked(const std::string& program_path,
                          const std::string& tests_path) {
  std::string text = read_file(program_path);
  if (!tests_path.empty()) {
    text += "\n";
    text += read_file(tests_path);
  }
  acs::Program prog = acs::parse_program(text, program_path);
  acs::check_program(prog);
  return prog;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

struct RepairOpts {
  std::string program, tests, index, corpus_dir, out_report, out_diff;
  int timeout = 1800;
  int max_level = 2;
  int top_k = 20;
  int method_budget = 5;
  bool stable_report = false;
  bool if_only = false;
};

int cmd_repair(const RepairOpts& o) {
  acs::Program prog = load_checked(o.program, o.tests);
  acs::CorpusIndex index;
  if (!o.index.empty())
    index = acs::load_index(o.index);
  else
    index = acs::build_index(o.corpus_dir, o.if_only);

  acs::Config cfg;
  cfg.timeout_seconds = o.timeout;
  cfg.max_level = o.max_level;
  cfg.top_k = o.top_k;
  cfg.method_budget = o.method_budget;
  acs::RepairResult result = acs::repair(prog, index, cfg);

  if (const char* lvl = std::getenv("ACS_LOG")) {
    std::string l = lvl;
    if (l == "debug" || l == "info")
      for (const auto& line : result.report["log"])
        std::cerr << "[acs] " << line.get<std::string>() << "\n";
  }
  if (o.stable_report) result.report["elapsedMs"] = 0;

  std::string report_text = result.report.dump(2) + "\n";
  if (o.out_report.empty())
    std::cout << report_text;
  else
    write_file(o.out_report, report_text);
  if (!o.out_diff.empty()) write_file(o.out_diff, result.diff);
  if (result.patch_found)
    std::cerr << "patch found (" << result.template_kind << ", phase "
              << result.phase << ")\n";
  else
    std::cerr << "no patch found\n";
  return result.patch_found ? 0 : 1;
}

int cmd_index(const std::string& corpus_dir, const std::string& out,
              bool if_only) {
  try {
    acs::CorpusIndex idx = acs::build_index(corpus_dir, if_only);
    acs::save_index(idx, out);
    std::cout << "indexed " << idx.rows.size() << " predicate rows\n";
    return 0;
  } catch (const acs::EmptyCorpus& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cmd_localize(const std::string& program, const std::string& tests) {
  acs::Program prog = load_checked(program, tests);
  auto traces = acs::trace_suite(prog);
  try {
    auto matrix = acs::build_coverage_matrix(traces);
    auto methods = acs::rank_methods(prog, matrix);
    std::cout.setf(std::ios::fixed);
    std::cout.precision(4);
    for (const auto& ms : methods)
      std::cout << ms.score << "  " << ms.fn->name << "\n";
    return 0;
  } catch (const acs::NoFailingTest& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

int cmd_mine(const std::string& file, bool if_only) {
  acs::Program prog = acs::parse_program(read_file(file), file);
  acs::check_program(prog);
  for (const auto& fn : prog.functions) {
    std::map<std::string, acs::Type> var_types;
    for (const auto& p : fn.params) var_types[p.name] = p.type;
    acs::for_each_statement(fn, [&](const acs::Stmt& s) {
      if (s.kind == acs::StmtKind::Let) var_types[s.name] = s.decl_type;
    });
    acs::for_each_statement(fn, [&](const acs::Stmt& s) {
      bool minable = s.kind == acs::StmtKind::If ||
                     (s.kind == acs::StmtKind::While && !if_only);
      if (!minable) return;
      auto vars = acs::vars_of(*s.expr);
      std::set<std::string> distinct(vars.begin(), vars.end());
      if (distinct.size() != 1) return;
      const std::string& var = *distinct.begin();
      auto it = var_types.find(var);
      if (it == var_types.end()) return;
      for (const auto& p :
           acs::pred_extract(*s.expr, var, it->second, &prog))
        std::cout << fn.name << " | " << var << ": "
                  << type_name(it->second) << " | " << acs::pred_display(p)
                  << "\n";
    });
  }
  return 0;
}

int cmd_run_tests(const std::string& program, const std::string& tests,
                  bool dump_traces) {
  acs::Program prog = load_checked(program, tests);
  acs::InstrumentationPlan plan;
  auto traces = acs::trace_suite(prog, plan);
  bool all_pass = true;
  for (const auto& t : traces) {
    std::string label = t.unit.test_name + "#" +
                        std::to_string(t.unit.assert_ordinal);
    if (t.verdict == acs::Verdict::Pass) {
      std::cout << "PASS " << label << "\n";
    } else {
      all_pass = false;
      const char* kind = t.verdict == acs::Verdict::Fail ? "FAIL" : "ERROR";
      std::cout << kind << " " << label;
      if (!t.detail.empty()) std::cout << ": " << t.detail;
      std::cout << "\n";
    }
    if (dump_traces) {
      std::cout << "  covered:";
      for (acs::NodeId id : t.trace.covered) std::cout << " " << id;
      std::cout << "\n";
    }
  }
  return all_pass ? 0 : 1;
}

int cmd_rank_vars(const std::string& program, const std::string& tests,
                  int max_level) {
  acs::Program prog = load_checked(program, tests);
  auto traces = acs::trace_suite(prog);
  try {
    auto matrix = acs::build_coverage_matrix(traces);
    auto methods = acs::rank_methods(prog, matrix);
    const acs::UnitTrace* failing = nullptr;
    for (const auto& t : traces)
      if (acs::is_failing(t.verdict)) {
        failing = &t;
        break;
      }
    for (const auto& ms : methods) {
      auto anchor = acs::locate_anchor(failing->trace, *ms.fn);
      if (!anchor) continue;
      const acs::Stmt* astmt = acs::find_stmt(prog, *anchor);
      std::cout << "method " << ms.fn->name << ", anchor: "
                << (astmt ? acs::print_stmt(*astmt).substr(
                                0, acs::print_stmt(*astmt).find('\n'))
                          : std::string("?"))
                << "\n";
      auto collected = acs::collect_candidates(*ms.fn, *anchor);
      auto graph = acs::build_dependency_graph(*ms.fn);
      auto rank = acs::rank_variables(std::move(collected.candidates), graph,
                                      max_level);
      int i = 1;
      for (const auto& c : rank.ranked) {
        const char* kind = c.kind == acs::CandKind::Param    ? "param"
                           : c.kind == acs::CandKind::Local ? "local"
                                                            : "expr";
        std::cout << "  " << i++ << ". " << c.text << " (" << kind
                  << ", level " << c.level << ", distance " << c.distance
                  << ")\n";
      }
      if (rank.cutoff_discards > 0)
        std::cout << "  discarded by level cutoff: " << rank.cutoff_discards
                  << "\n";
      return 0;
    }
    std::cerr << "error: failing unit covers no method\n";
    return 1;
  } catch (const acs::NoFailingTest& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Test-driven automatic repair for MiniLang programs"};
  app.require_subcommand(1);

  RepairOpts ro;
  auto* repair = app.add_subcommand(
      "repair", "Search for a patch that makes all tests pass");
  repair->add_option("--program", ro.program, "Program source file")
      ->required()
      ->check(CLI::ExistingFile);
  repair->add_option("--tests", ro.tests, "Test suite file")
      ->required()
      ->check(CLI::ExistingFile);
  repair->add_option("--index", ro.index, "Predicate index file (JSON lines)")
      ->check(CLI::ExistingFile);
  repair
      ->add_option("--corpus-dir", ro.corpus_dir,
                   "Mine this directory of .mini files instead of --index")
      ->check(CLI::ExistingDirectory);
  repair->add_option("--out-report", ro.out_report,
                     "Write the JSON report here (default: stdout)");
  repair->add_option("--out-diff", ro.out_diff,
                     "Write the unified diff of the patch here");
  repair->add_option("--timeout", ro.timeout, "Search budget in seconds");
  repair->add_option("--max-level", ro.max_level,
                     "Deepest dependency level considered");
  repair->add_option("--top-k", ro.top_k,
                     "Mined predicates tried per candidate");
  repair->add_option("--method-budget", ro.method_budget,
                     "Suspicious methods tried per phase");
  repair->add_flag("--if-only", ro.if_only,
                   "Mine only if conditions when using --corpus-dir");
  repair->add_flag("--stable-report", ro.stable_report,
                   "Zero out timing fields for byte-stable output");

  std::string ix_dir, ix_out;
  bool ix_if_only = false;
  auto* index =
      app.add_subcommand("index", "Build a predicate index from a corpus");
  index->add_option("--corpus-dir", ix_dir, "Directory of .mini files")
      ->required()
      ->check(CLI::ExistingDirectory);
  index->add_option("--out", ix_out, "Output index file")->required();
  index->add_flag("--if-only", ix_if_only, "Mine only if conditions");

  std::string lz_program, lz_tests;
  auto* localize =
      app.add_subcommand("localize", "Rank methods by suspiciousness");
  localize->add_option("--program", lz_program, "Program source file")
      ->required()
      ->check(CLI::ExistingFile);
  localize->add_option("--tests", lz_tests, "Test suite file")
      ->required()
      ->check(CLI::ExistingFile);

  std::string mn_file;
  bool mn_if_only = false;
  auto* mine =
      app.add_subcommand("mine", "Print predicates extracted from one file");
  mine->add_option("--file", mn_file, "MiniLang source file")
      ->required()
      ->check(CLI::ExistingFile);
  mine->add_flag("--if-only", mn_if_only, "Mine only if conditions");

  std::string rt_program, rt_tests;
  bool rt_dump = false;
  auto* run_tests = app.add_subcommand("run-tests", "Run the test suite");
  run_tests->add_option("--program", rt_program, "Program source file")
      ->required()
      ->check(CLI::ExistingFile);
  run_tests->add_option("--tests", rt_tests, "Test suite file")
      ->required()
      ->check(CLI::ExistingFile);
  run_tests->add_flag("--dump-traces", rt_dump,
                      "Also print covered statement ids per unit");

  std::string rv_program, rv_tests;
  int rv_max_level = 2;
  auto* rank_vars = app.add_subcommand(
      "rank-vars", "Show ranked repair candidates for the top failing unit");
  rank_vars->add_option("--program", rv_program, "Program source file")
      ->required()
      ->check(CLI::ExistingFile);
  rank_vars->add_option("--tests", rv_tests, "Test suite file")
      ->required()
      ->check(CLI::ExistingFile);
  rank_vars->add_option("--max-level", rv_max_level,
                        "Deepest dependency level considered");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (repair->parsed()) {
      if (ro.index.empty() == ro.corpus_dir.empty()) {
        std::cerr << "error: provide exactly one of --index or --corpus-dir\n";
        return 2;
      }
      return cmd_repair(ro);
    }
    if (index->parsed()) return cmd_index(ix_dir, ix_out, ix_if_only);
    if (localize->parsed()) return cmd_localize(lz_program, lz_tests);
    if (mine->parsed()) return cmd_mine(mn_file, mn_if_only);
    if (run_tests->parsed()) return cmd_run_tests(rt_program, rt_tests, rt_dump);
    if (rank_vars->parsed())
      return cmd_rank_vars(rv_program, rv_tests, rv_max_level);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
