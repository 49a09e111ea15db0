#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace acs {

namespace detail {

inline std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : s) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

struct DiffOp {
  char tag;  // ' ' keep, '-' delete, '+' add
  size_t a_idx = 0;
  size_t b_idx = 0;
};

inline std::vector<DiffOp> diff_ops(const std::vector<std::string>& a,
                                    const std::vector<std::string>& b) {
  const size_t n = a.size(), m = b.size();
  // LCS lengths; inputs are small source files, quadratic is fine.
  std::vector<std::vector<size_t>> lcs(n + 1, std::vector<size_t>(m + 1, 0));
  for (size_t i = n; i-- > 0;)
    for (size_t j = m; j-- > 0;)
      lcs[i][j] = a[i] == b[j] ? lcs[i + 1][j + 1] + 1
                               : std::max(lcs[i + 1][j], lcs[i][j + 1]);
  std::vector<DiffOp> ops;
  size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j]) {
      ops.push_back({' ', i++, j++});
    } else if (lcs[i + 1][j] >= lcs[i][j + 1]) {
      ops.push_back({'-', i++, j});
    } else {
      ops.push_back({'+', i, j++});
    }
  }
  while (i < n) ops.push_back({'-', i++, j});
  while (j < m) ops.push_back({'+', i, j++});
  return ops;
}

}  // namespace detail

// Unified diff with 3 lines of context.
inline std::string unified_diff(const std::string& before,
                                const std::string& after,
                                const std::string& before_name,
                                const std::string& after_name) {
  constexpr size_t kContext = 3;
  auto a = detail::split_lines(before);
  auto b = detail::split_lines(after);
  auto ops = detail::diff_ops(a, b);

  bool any_change = false;
  for (const auto& op : ops)
    if (op.tag != ' ') any_change = true;
  if (!any_change) return "";

  std::string out = "--- " + before_name + "\n+++ " + after_name + "\n";

  // Group changes into hunks, merging when separated by <= 2*context keeps.
  size_t k = 0;
  while (k < ops.size()) {
    if (ops[k].tag == ' ') {
      ++k;
      continue;
    }
    size_t start = k;
    size_t end = k;  // exclusive end of the hunk's change region
    size_t run = 0;
    for (size_t t = k; t < ops.size(); ++t) {
      if (ops[t].tag == ' ') {
        if (++run > 2 * kContext) break;
      } else {
        run = 0;
        end = t + 1;
      }
    }
    size_t lo = start >= kContext ? start - kContext : 0;
    size_t hi = std::min(end + kContext, ops.size());

    size_t a_start = ops[lo].a_idx, b_start = ops[lo].b_idx;
    size_t a_count = 0, b_count = 0;
    for (size_t t = lo; t < hi; ++t) {
      if (ops[t].tag != '+') ++a_count;
      if (ops[t].tag != '-') ++b_count;
    }
    out += "@@ -" + std::to_string(a_count ? a_start + 1 : a_start) + "," +
           std::to_string(a_count) + " +" +
           std::to_string(b_count ? b_start + 1 : b_start) + "," +
           std::to_string(b_count) + " @@\n";
    for (size_t t = lo; t < hi; ++t) {
      const auto& op = ops[t];
      out += op.tag;
      out += op.tag == '+' ? b[op.b_idx] : a[op.a_idx];
      out += '\n';
    }
    k = hi;
  }
  return out;
}

}  // namespace acs
