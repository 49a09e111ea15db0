// Doc-comment parsing, @throws subject extraction, and candidate filtering.
#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "acs/check.hpp"
#include "acs/doc_filter.hpp"
#include "acs/parser.hpp"
#include "acs/var_rank.hpp"
#include "fixtures.hpp"

using namespace acs;

namespace {

Program parse_checked(const std::string& text, const std::string& name = "t") {
  Program p = parse_program(text, name);
  check_program(p);
  return p;
}

VarCandidate named(const std::string& n) {
  VarCandidate c;
  c.kind = CandKind::Param;
  c.name = n;
  c.text = n;
  return c;
}

std::vector<std::string> texts(const std::vector<VarCandidate>& cands) {
  std::vector<std::string> out;
  for (const auto& c : cands) out.push_back(c.text);
  return out;
}

}  // namespace

TEST_CASE("identifiers split on underscores and case boundaries") {
  CHECK(split_identifier("functionValue") ==
        std::vector<std::string>{"function", "value"});
  CHECK(split_identifier("elitism_rate") ==
        std::vector<std::string>{"elitism", "rate"});
  CHECK(split_identifier("maxIterations") ==
        std::vector<std::string>{"max", "iterations"});
  CHECK(split_identifier("initial") == std::vector<std::string>{"initial"});
  CHECK(split_identifier("x") == std::vector<std::string>{"x"});
}

TEST_CASE("doc comments yield one tag per @throws line") {
  Program p = parse_checked(fixtures::kBoundedProgram);
  REQUIRE(p.functions[0].doc.has_value());
  auto tags = parse_doc(*p.functions[0].doc);
  REQUIRE(tags.size() == 2);
  CHECK(tags[0].exception_name == "OutOfRangeException");
  // The leading "if" of the condition text is dropped.
  CHECK(tags[0].condition_text.find("initial is not between") == 0);
  CHECK(tags[1].exception_name == "ConvergenceException");
  CHECK(tags[1].condition_text.find("the iteration does not settle") == 0);
}

TEST_CASE("the tag subject ends at the first verb-like word") {
  ThrowsTag tag;
  tag.exception_name = "OutOfRangeException";
  tag.condition_text = "initial is not between min and max.";
  CHECK(tag_mentions(tag, "initial"));
  CHECK_FALSE(tag_mentions(tag, "min"));
  CHECK_FALSE(tag_mentions(tag, "max"));
  CHECK_FALSE(tag_mentions(tag, "functionValue"));

  ThrowsTag exceeds;
  exceeds.exception_name = "E";
  exceeds.condition_text = "the rate exceeds one.";
  // Matching goes by the last word of the split identifier.
  CHECK(exceeds.condition_text.find("exceeds") != std::string::npos);
  CHECK(tag_mentions(exceeds, "elitismRate"));
  CHECK(tag_mentions(exceeds, "rate"));
  CHECK_FALSE(tag_mentions(exceeds, "one"));  // after the verb
}

TEST_CASE("filtering keeps only mentioned candidates") {
  ThrowsTag tag;
  tag.exception_name = "OutOfRangeException";
  tag.condition_text = "initial is not between min and max.";

  std::vector<VarCandidate> cands;
  cands.push_back(named("initial"));
  cands.push_back(named("min"));
  cands.push_back(named("max"));
  cands.push_back(named("functionValue"));

  auto kept = filter_for_exception(std::move(cands), {tag},
                                   "OutOfRangeException");
  CHECK(texts(kept) == std::vector<std::string>{"initial"});
}

TEST_CASE("filtering is a no-op without a matching, mentioning tag") {
  ThrowsTag other;
  other.exception_name = "NullException";
  other.condition_text = "initial is missing.";

  auto make_cands = [] {
    std::vector<VarCandidate> cands;
    cands.push_back(named("min"));
    cands.push_back(named("max"));
    return cands;
  };

  // No tag for the raised exception: unchanged.
  auto kept = filter_for_exception(make_cands(), {other}, "OutOfRangeException");
  CHECK(texts(kept) == std::vector<std::string>{"min", "max"});

  // A matching tag that mentions none of the candidates: unchanged.
  ThrowsTag unrelated;
  unrelated.exception_name = "OutOfRangeException";
  unrelated.condition_text = "the buffer is full.";
  auto kept2 =
      filter_for_exception(make_cands(), {unrelated}, "OutOfRangeException");
  CHECK(texts(kept2) == std::vector<std::string>{"min", "max"});

  // No tags at all: unchanged.
  auto kept3 = filter_for_exception(make_cands(), {}, "OutOfRangeException");
  CHECK(texts(kept3) == std::vector<std::string>{"min", "max"});
}

TEST_CASE("the first tag for an exception wins") {
  ThrowsTag first;
  first.exception_name = "E";
  first.condition_text = "alpha is too large.";
  ThrowsTag second;
  second.exception_name = "E";
  second.condition_text = "beta is too large.";

  std::vector<VarCandidate> cands;
  cands.push_back(named("alpha"));
  cands.push_back(named("beta"));

  auto kept = filter_for_exception(std::move(cands), {first, second}, "E");
  CHECK(texts(kept) == std::vector<std::string>{"alpha"});
}

TEST_CASE("condition expressions survive when any constituent is mentioned") {
  ThrowsTag tag;
  tag.exception_name = "E";
  tag.condition_text = "rate is out of range.";

  VarCandidate pseudo;
  pseudo.kind = CandKind::CondExpr;
  pseudo.text = "rate * 2.0";
  {
    auto mul = make_expr(ExprKind::Binary);
    mul->name = "*";
    auto v = make_expr(ExprKind::Var);
    v->name = "rate";
    auto two = make_expr(ExprKind::FloatLit);
    two->float_val = 2.0;
    mul->args.push_back(std::move(v));
    mul->args.push_back(std::move(two));
    pseudo.ref = std::move(mul);
  }

  std::vector<VarCandidate> cands;
  cands.push_back(named("limit"));
  cands.push_back(std::move(pseudo));

  auto kept = filter_for_exception(std::move(cands), {tag}, "E");
  CHECK(texts(kept) == std::vector<std::string>{"rate * 2.0"});
}

TEST_CASE("multi-line doc text concatenates into the tag condition") {
  Program p = parse_checked(
      "/**\n"
      " * Parses a value.\n"
      " * @throws FormatException if the given text\n"
      " *     does not contain digits.\n"
      " * @param text the input\n"
      " */\n"
      "fn parse_num(text: string) -> int {\n    return 0;\n}\n");
  auto tags = parse_doc(*p.functions[0].doc);
  REQUIRE(tags.size() == 1);
  CHECK(tags[0].exception_name == "FormatException");
  CHECK(tags[0].condition_text.find("the given text does not contain") == 0);
  CHECK(tag_mentions(tags[0], "text"));
  CHECK_FALSE(tag_mentions(tags[0], "digits"));
}
