#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

#include "acs/ast.hpp"
#include "acs/var_rank.hpp"

namespace acs {

// One `@throws Exception <description>` tag from a doc comment.
struct ThrowsTag {
  std::string exception_name;
  std::string condition_text;  // description with a leading "if" removed
};

// Split an identifier into lowercase words at underscores and at
// lower-to-upper case boundaries: "elitismRate" -> {"elitism", "rate"},
// "max_value" -> {"max", "value"}.
inline std::vector<std::string> split_identifier(const std::string& name) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  };
  for (size_t i = 0; i < name.size(); ++i) {
    char c = name[i];
    if (c == '_') {
      flush();
      continue;
    }
    if (i > 0 && std::islower(static_cast<unsigned char>(name[i - 1])) &&
        std::isupper(static_cast<unsigned char>(c)))
      flush();
    cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  flush();
  return words;
}

namespace detail {

inline std::string strip_doc_furniture(std::string line) {
  auto ltrim = [](std::string& s) {
    size_t i = s.find_first_not_of(" \t");
    s.erase(0, i == std::string::npos ? s.size() : i);
  };
  ltrim(line);
  if (line.rfind("/**", 0) == 0) line.erase(0, 3);
  else if (line.rfind("/*", 0) == 0) line.erase(0, 2);
  if (line.size() >= 2 && line.compare(line.size() - 2, 2, "*/") == 0)
    line.erase(line.size() - 2);
  ltrim(line);
  while (!line.empty() && line.front() == '*') {
    line.erase(0, 1);
    ltrim(line);
  }
  return line;
}

// Lowercased word with surrounding punctuation removed, for matching.
inline std::string match_word(const std::string& tok) {
  size_t b = 0, e = tok.size();
  auto alnum = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (b < e && !alnum(tok[b])) ++b;
  while (e > b && !alnum(tok[e - 1])) --e;
  std::string out;
  for (size_t i = b; i < e; ++i)
    out.push_back(
        static_cast<char>(std::tolower(static_cast<unsigned char>(tok[i]))));
  return out;
}

inline bool is_verb_like(const std::string& w) {
  static const std::set<std::string> kVerbs = {
      "is", "are", "does", "cannot", "exceeds", "equals", "contains", "has"};
  return kVerbs.count(w) != 0;
}

// Tokens of the tag's subject region: everything before the first verb-like
// word, or the whole description when none appears. Words are maximal
// identifier-character runs, lowercased.
inline std::set<std::string> subject_words(const ThrowsTag& tag) {
  std::vector<std::string> words;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      words.push_back(cur);
      cur.clear();
    }
  };
  for (char c : tag.condition_text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
      cur.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else
      flush();
  }
  flush();
  auto verb = std::find_if(words.begin(), words.end(), is_verb_like);
  std::set<std::string> out(words.begin(),
                            verb == words.end() ? words.end() : verb);
  return out;
}

}  // namespace detail

// Extract @throws tags from a doc comment. A tag's description runs until
// the next @tag or the end of the comment.
inline std::vector<ThrowsTag> parse_doc(const DocComment& doc) {
  std::vector<std::string> toks;
  for (const auto& raw : doc.lines) {
    std::string line = detail::strip_doc_furniture(raw);
    std::string cur;
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!cur.empty()) toks.push_back(cur), cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) toks.push_back(cur);
  }
  std::vector<ThrowsTag> tags;
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i] != "@throws") continue;
    if (i + 1 >= toks.size()) break;
    ThrowsTag tag;
    tag.exception_name = toks[i + 1];
    std::vector<std::string> text;
    size_t j = i + 2;
    for (; j < toks.size() && toks[j][0] != '@'; ++j) text.push_back(toks[j]);
    if (!text.empty() && detail::match_word(text.front()) == "if")
      text.erase(text.begin());
    std::string joined;
    for (const auto& t : text) {
      if (!joined.empty()) joined.push_back(' ');
      joined += t;
    }
    tag.condition_text = std::move(joined);
    tags.push_back(std::move(tag));
    i = j - 1;
  }
  return tags;
}

// True when the variable is mentioned in the tag's subject region: the last
// word of the split identifier appears as a whole word, case-insensitively.
inline bool tag_mentions(const ThrowsTag& tag, const std::string& var_name) {
  auto words = split_identifier(var_name);
  if (words.empty()) return false;
  return detail::subject_words(tag).count(words.back()) != 0;
}

// Narrow candidates using the first @throws tag for the given exception.
// Variables keep their place only if mentioned; pseudo-variables if any
// constituent variable is mentioned. When the tag mentions none of them,
// the candidate list is returned unchanged.
inline std::vector<VarCandidate> filter_for_exception(
    std::vector<VarCandidate> cands, const std::vector<ThrowsTag>& tags,
    const std::string& exception_name) {
  const ThrowsTag* tag = nullptr;
  for (const auto& t : tags)
    if (t.exception_name == exception_name) {
      tag = &t;
      break;
    }
  if (!tag) return cands;
  auto keeps = [&](const VarCandidate& c) {
    if (c.kind == CandKind::CondExpr) {
      for (const auto& v : vars_of(*c.ref))
        if (tag_mentions(*tag, v)) return true;
      return false;
    }
    return tag_mentions(*tag, c.name);
  };
  bool any = std::any_of(cands.begin(), cands.end(), keeps);
  if (!any) return cands;
  std::vector<VarCandidate> out;
  for (auto& c : cands)
    if (keeps(c)) out.push_back(std::move(c));
  return out;
}

}  // namespace acs
