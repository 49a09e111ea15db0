// Embedded MiniLang sources shared by the unit and acceptance suites: buggy
// programs with their test suites, and the corpora the repairs mine.
#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

namespace fixtures {

// --- Least common multiple: |MIN_INT| overflows back to MIN_INT, so the
// absolute value stays negative and no exception is raised.
inline constexpr const char* kLcmProgram = R"(fn lcm(a: int, b: int) -> int {
    let m: int = mul(a / gcd(a, b), b);
    let lcm: int = m;
    if (m < 0) {
        lcm = 0 - m;
    }
    return lcm;
}

fn gcd(a: int, b: int) -> int {
    let x: int = a;
    let y: int = b;
    while (y != 0) {
        let t: int = y;
        y = x % y;
        x = t;
    }
    return x;
}

fn mul(p: int, q: int) -> int {
    return p * q;
}
)";

inline constexpr const char* kLcmTests = R"(test lcm_basic {
    assert_eq(50, lcm(1, 50));
}

test lcm_overflow {
    assert_throws(ArithmeticException, lcm(MIN_INT, 1));
}
)";

inline constexpr const char* kHourCorpus = R"(fn check(hour: int) -> bool {
    if (hour > 24) {
        return true;
    }
    return false;
}
)";

// --- Dot product: the second element is read unconditionally, so
// single-element arrays hit an index error instead of the short answer.
inline constexpr const char* kDotProgram =
    R"(fn dot_tail(a: float[], b: float[], i: int) -> float {
    if (i >= length(a)) {
        return 0.0;
    }
    return a[i] * b[i] + dot_tail(a, b, i + 1);
}

fn linear_combination(a: float[], b: float[]) -> float {
    let len: int = length(a);
    let head: float = a[0] * b[0];
    let neck: float = a[1] * b[1];
    let rest: float = dot_tail(a, b, 2);
    return head + neck + rest;
}
)";

inline constexpr const char* kDotTests = R"(test single_element {
    let a: float[] = [1.23];
    let b: float[] = [98765432.1];
    assert_eq(a[0] * b[0], linear_combination(a, b));
}

test two_elements {
    let c: float[] = [2.0, 3.0];
    let d: float[] = [4.0, 5.0];
    assert_eq(23.0, linear_combination(c, d));
}
)";

inline constexpr const char* kDotCorpusSizes =
    R"(fn head_or_sum(len: int) -> int {
    if (len == 1) {
        return 1;
    }
    return 2;
}

fn tail_len(len: int) -> int {
    if (len == 1) {
        return 0;
    }
    if (len < 1) {
        return 0;
    }
    return len - 1;
}
)";

inline constexpr const char* kDotCorpusChecks =
    R"(fn check_len(values: float[]) -> bool {
    let len: int = length(values);
    if (len == 1) {
        return true;
    }
    return false;
}
)";

// --- Root bracketing: when the product of the endpoint values underflows
// to -0.0, the sign test `>= 0.0` wrongly reports "no bracket".
inline constexpr const char* kBracketProgram = R"(fn fval(x: float) -> float {
    return (x - 2.0) * 1e-150;
}

fn mid_of(lo: float, hi: float) -> float {
    return (lo + hi) / 2.0;
}

fn bracket_root(lo: float, hi: float) -> float {
    let fa: float = fval(lo);
    let fb: float = fval(hi);
    let tries: int = 0;
    while ((fa * fb > 0.0) && (tries < 3)) {
        fa = fa * 0.5;
        tries = tries + 1;
    }
    if (fa * fb >= 0.0) {
        throw NoBracketException;
    }
    return bisect(lo, hi);
}

fn bisect(lo: float, hi: float) -> float {
    let a: float = lo;
    let b: float = hi;
    let fa: float = fval(a);
    let steps: int = 0;
    while (steps < 200) {
        let mid: float = (a + b) / 2.0;
        let fm: float = fval(mid);
        if (fm == 0.0) {
            return mid;
        }
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
        steps = steps + 1;
    }
    return (a + b) / 2.0;
}
)";

inline constexpr const char* kBracketTests = R"(test finds_root_at_touch {
    assert_eq(mid_of(2.0 - 0.00000000000000044, 2.0 + 0.00000000000000044), bracket_root(2.0 - 0.00000000000000044, 2.0 + 0.00000000000000044));
}

test rejects_same_sign_above {
    assert_throws(NoBracketException, bracket_root(3.0, 5.0));
}

test rejects_same_sign_below {
    assert_throws(NoBracketException, bracket_root(0.0 - 5.0, 0.0 - 3.0));
}
)";

inline constexpr const char* kBracketCorpus =
    R"(fn bracket_guard(w: float) -> bool {
    if (w == 0.0) {
        return true;
    }
    return false;
}
)";

// --- Population settings: the constructor accepts any rate; two failing
// tests demand range guards at both ends.
inline constexpr const char* kPopulationProgram =
    R"(record Population { limit: int, rate: float }

fn make_population(limit: int, elitismRate: float) -> Population {
    let p: Population = Population{limit: limit, rate: elitismRate};
    return p;
}
)";

inline constexpr const char* kPopulationTests = R"(test rejects_negative_rate {
    assert_throws(OutOfRangeException, make_population(100, 0.0 - 0.25));
}

test rejects_large_rate {
    assert_throws(OutOfRangeException, make_population(100, 1.25));
}

test accepts_valid_rate {
    let p: Population = make_population(100, 0.5);
    assert_eq(0.5, p.rate);
}
)";

inline constexpr const char* kPopulationCorpusClamp =
    R"(fn clamp_rate(rate: float) -> float {
    if (rate < 0.0) {
        return 0.0;
    }
    if (rate > 1.0) {
        return 1.0;
    }
    return rate;
}
)";

inline constexpr const char* kPopulationCorpusSuccess =
    R"(fn normalize_rate(successRate: float) -> float {
    if (successRate < 0.0) {
        return 0.0;
    }
    if (successRate > 1.0) {
        return 1.0;
    }
    return successRate;
}
)";

// --- Negative control: the only variable separating the failing run sits
// at dependency level 3, beyond the default cutoff, so no repair may be
// proposed.
inline constexpr const char* kClassifyProgram =
    R"(fn classify(a: int, b: int) -> int {
    let raw: int = a + b;
    let bucket: int = raw / 2;
    let code: int = bucket * 10;
    return code;
}
)";

inline constexpr const char* kClassifyTests = R"(test odd_sum {
    assert_eq(35, classify(3, 4));
}

test even_sum {
    assert_eq(30, classify(3, 3));
}

test other_even {
    assert_eq(30, classify(2, 4));
}
)";

// --- Chain-shaped method for dependency-level checks: the result variable
// depends directly on both parameters.
inline constexpr const char* kChainProgram =
    R"(fn lcm_units(a: int, b: int) -> int {
    let lcm: int = abs_of(mul_exact(a / gcd_of(a, b), b));
    return lcm;
}

fn abs_of(v: int) -> int {
    if (v < 0) {
        return 0 - v;
    }
    return v;
}

fn mul_exact(p: int, q: int) -> int {
    return p * q;
}

fn gcd_of(a: int, b: int) -> int {
    let x: int = a;
    let y: int = b;
    while (y != 0) {
        let t: int = y;
        y = x % y;
        x = t;
    }
    return x;
}
)";

// --- Documented range check for doc-filter tests.
inline constexpr const char* kBoundedProgram = R"(/**
 * Solves for a value near the starting point.
 * @throws OutOfRangeException if initial is not between min and max.
 * @throws ConvergenceException if the iteration does not settle.
 */
fn bounded(initial: float, min: float, max: float, functionValue: float) -> float {
    return initial;
}
)";

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace fixtures
