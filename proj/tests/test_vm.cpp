#include <doctest.h>

#include <string>
#include <vector>

#include "test_util.hpp"

using namespace dinolite;

namespace {

// Runs on the stack vm, the plain rtl vm and the fully optimized rtl vm;
// all three must agree. Returns the optimized result.
dltest::RunResult run_all(const std::string& src, RunOptions ropts = {}) {
    dltest::RunResult stack = dltest::run_src(src, dltest::stack_opts(), ropts);
    dltest::RunResult rtl = dltest::run_src(src, dltest::rtl_opts(false, false, false), ropts);
    dltest::RunResult full = dltest::run_src(src, dltest::rtl_opts(true, true, true), ropts);
    CHECK(stack.out == full.out);
    CHECK(stack.exit_code == full.exit_code);
    CHECK(rtl.out == full.out);
    CHECK(rtl.exit_code == full.exit_code);
    return full;
}

void expect_out(const std::string& src, const std::string& want) {
    dltest::RunResult r = run_all(src);
    CHECK_MESSAGE(r.out == want, "src: ", src, " err: ", r.error);
    CHECK(r.exit_code == 0);
}

void expect_error(const std::string& src, const std::string& fragment) {
    dltest::RunResult r = run_all(src);
    CHECK(r.exit_code == 70);
    CHECK_MESSAGE(r.error.find(fragment) != std::string::npos, "error was: ", r.error,
                  " wanted: ", fragment);
}

} // namespace

TEST_CASE("integer arithmetic wraps and divides toward zero") {
    expect_out("putln(2 + 3 * 4);", "14\n");
    expect_out("putln(9223372036854775807 + 1);", "-9223372036854775808\n");
    expect_out("putln(0 - 9223372036854775807 - 1);", "-9223372036854775808\n");
    expect_out("putln(-7 / 2);", "-3\n");
    expect_out("putln(-7 % 2);", "-1\n");
    expect_out("putln(7 % -2);", "1\n");
    expect_out("var m = 0 - 9223372036854775807 - 1; putln(m / -1);", "-9223372036854775808\n");
    expect_out("var m = 0 - 9223372036854775807 - 1; putln(m % -1);", "0\n");
}

TEST_CASE("mixed numerics promote to float and render distinctly") {
    expect_out("putln(1 + 2.5);", "3.5\n");
    expect_out("putln(1.0 + 2);", "3\n");
    expect_out("putln(type(1.0 + 2));", "float\n");
    expect_out("putln(7.0 / 2);", "3.5\n");
    expect_out("putln(-2.5);", "-2.5\n");
}

TEST_CASE("division and modulo by zero raise") {
    expect_error("putln(1 / 0);", "division by zero");
    expect_error("putln(1 % 0);", "modulo by zero");
    expect_error("putln(1.0 / 0.0);", "division by zero");
    expect_error("putln(1.0 % 2.0);", "cannot");
}

TEST_CASE("strings concatenate with plus and compare lexicographically") {
    expect_out("putln(\"foo\" + \"bar\");", "foobar\n");
    expect_out("putln(\"abc\" < \"abd\");", "1\n");
    expect_out("putln(\"abc\" == \"abc\");", "1\n");
    expect_out("putln(len(\"hello\"));", "5\n");
    expect_error("putln(\"a\" + 1);", "cannot add");
}

TEST_CASE("comparisons yield int 0 or 1 and mixed numbers compare by value") {
    expect_out("putln(1 < 2);", "1\n");
    expect_out("putln(2 < 1);", "0\n");
    expect_out("putln(1 == 1.0);", "1\n");
    expect_out("putln(1.5 > 1);", "1\n");
    expect_error("putln(1 < \"a\");", "cannot order");
    expect_out("putln(1 == \"a\");", "0\n"); // equality across tags is just false
    expect_out("var u; var w; putln(u == w); putln(u == 0);", "1\n0\n");
}

TEST_CASE("truthiness: nil and int zero are false, everything else true") {
    expect_out("if (0) putln(\"t\"); else putln(\"f\");", "f\n");
    expect_out("if (0.0) putln(\"t\"); else putln(\"f\");", "t\n");
    expect_out("if (\"\") putln(\"t\"); else putln(\"f\");", "t\n");
    expect_out("var u; if (u) putln(\"t\"); else putln(\"f\");", "f\n");
    expect_out("var u; putln(!u);", "1\n");
}

TEST_CASE("logical operators short-circuit and canonicalize to 0 or 1") {
    expect_out("putln(1 && 2);", "1\n");
    expect_out("putln(0 || 3);", "1\n");
    expect_out("putln(0 && (1 / 0));", "0\n");
    expect_out("putln(1 || (1 / 0));", "1\n");
    // both operands run when the left is truthy, and the result is canonical
    expect_out("var x = 0; fun set5 { x = 5; return 7; } var y = set5() && 0;"
               "putln(x); putln(y);",
               "5\n0\n");
}

TEST_CASE("control flow: loops, break, continue, ternary") {
    expect_out("var s = 0; var i; for (i = 0; i < 10; i++) { if (i % 2) continue; s += i; } putln(s);",
               "20\n");
    expect_out("var i = 0; while (1) { i++; if (i == 4) break; } putln(i);", "4\n");
    expect_out("var i; var s = 0; for (i = 10; i > 0; i--) s++; putln(s);", "10\n");
    expect_out("putln(3 > 2 ? \"yes\" : \"no\");", "yes\n");
    expect_out("var n = 0; for (; n < 3;) n++; putln(n);", "3\n");
}

TEST_CASE("arrays: literals, fill, mutation, bounds") {
    expect_out("var a = [1, 2, 3]; putln(a[0] + a[2]);", "4\n");
    expect_out("var a = [3 : 7]; putln(a[0] + a[1] + a[2]);", "21\n");
    expect_out("var a = [1]; a[0] = 5; putln(a[0]);", "5\n");
    expect_out("var a = []; putln(len(a));", "0\n");
    expect_out("var a = [[1, 2], [3]]; putln(len(a[0]) + a[1][0]);", "5\n");
    expect_out("var a = [1, 2]; var b = a; b[0] = 9; putln(a[0]);", "9\n"); // reference semantics
    expect_error("var a = [1]; putln(a[1]);", "out of range");
    expect_error("var a = [1]; putln(a[0 - 1]);", "out of range");
    expect_error("var a = [1]; putln(a[1.0]);", "must be int");
    expect_error("var a = [0 - 1 : 0];", "negative");
    expect_out("putln([2 : 0.5][1] + 1);", "1.5\n");
}

TEST_CASE("tables: literals, writes, lookups, deep keys") {
    expect_out("var t = tab[\"a\": 1, 2: \"two\"]; putln(t[\"a\"]); putln(t[2]);", "1\ntwo\n");
    expect_out("var t = tab[]; t[1.5] = \"f\"; putln(t[1.5]); putln(len(t));", "f\n1\n");
    expect_out("var t = tab[]; t[\"k\"] = 1; t[\"k\"] = 2; putln(t[\"k\"]); putln(len(t));",
               "2\n1\n");
    // aggregate keys are captured by value at insertion time
    expect_out("var t = tab[]; var k = [1, 2]; t[k] = \"hit\"; k[0] = 9; putln(t[[1, 2]]);",
               "hit\n");
    expect_error("var t = tab[]; putln(t[\"nope\"]);", "not found");
    expect_error("putln(len(3));", "len of");
    expect_error("var x = 1; putln(x[0]);", "cannot index");
}

TEST_CASE("functions: recursion, defaults, arity and call errors") {
    expect_out("fun add(a, b) { return a + b; } putln(add(2, 3));", "5\n");
    expect_out("fun f { } putln(type(f()));", "nil\n"); // missing return yields nil
    expect_out("fun fib(n) { if (n < 2) return n; return fib(n - 1) + fib(n - 2); } putln(fib(10));",
               "55\n");
    expect_error("fun f(a) { return a; } putln(f());", "expects 1 argument");
    expect_error("fun f(a) { return a; } putln(f(1, 2));", "expects 1 argument");
    expect_error("var x = 3; x();", "call of non-function");
    expect_error("fun f { return f(); } f();", "depth limit");
}

TEST_CASE("locals live for the whole activation and redeclare per call") {
    expect_out("fun f(set) { var y; if (set) y = 1; return type(y); } putln(f(1)); putln(f(0));",
               "int\nnil\n");
    expect_out("fun c { var n = 0; n++; return n; } putln(c()); putln(c());", "1\n1\n");
}

TEST_CASE("globals are shared across functions") {
    expect_out("var g = 0; fun bump { g += 1; } bump(); bump(); putln(g);", "2\n");
    expect_out("var seed = 7; fun next { seed = seed * 3; return seed; } next(); putln(next());",
               "63\n");
}

TEST_CASE("builtins: conversions, type names, rendering") {
    expect_out("putln(int(\"42\") + 1);", "43\n");
    expect_out("putln(int(3.9));", "3\n");
    expect_out("putln(int(-3.9));", "-3\n");
    expect_out("putln(float(\"2.5\") * 2);", "5\n");
    expect_out("putln(str(12) + str(34));", "1234\n");
    expect_out("putln(type(1) + \" \" + type(1.0) + \" \" + type(\"s\"));", "int float str\n");
    expect_out("var u; putln(type([1]) + \" \" + type(tab[]) + \" \" + type(u));", "arr tab nil\n");
    expect_out("fun f { } putln(type(f));", "fun\n");
    expect_out("put(1); put(\"x\"); putln(2);", "1x2\n");
    expect_error("putln(int(\"4x\"));", "cannot parse");
    expect_error("putln(int(\"\"));", "cannot parse");
    expect_error("putln(float(\"one\"));", "cannot parse");
    expect_error("putln(int(1e300));", "out of int range");
    expect_error("putln(int([1]));", "cannot convert");
}

TEST_CASE("argv arrives as an array of strings") {
    RunOptions ro;
    ro.argv = {"18", "x"};
    dltest::RunResult r = run_all("putln(len(argv)); putln(argv[0] + argv[1]);", ro);
    CHECK(r.out == "2\n18x\n");
    dltest::RunResult empty = run_all("putln(len(argv));");
    CHECK(empty.out == "0\n");
}

TEST_CASE("runtime errors from nil arithmetic name the operation") {
    expect_error("var u; putln(u + 1);", "cannot add");
    expect_error("var u; var w; putln(u + w);", "cannot add");
    expect_error("var u; putln(u * 2);", "cannot");
    expect_error("var u; putln(-u);", "cannot negate");
}

TEST_CASE("memoization caches pure scalar calls only") {
    std::string fib = "!pure fun fib(n) { if (n < 2) return n; return fib(n - 1) + fib(n - 2); }"
                      "putln(fib(20));";
    CompileOutput out = compile_source(fib, {});
    RunOptions memo_on;
    dltest::RunResult r = dltest::run_compiled(out.program, memo_on);
    CHECK(r.out == "6765\n");
    const MemoFuncStats& stats = r.report.memo[1];
    CHECK(stats.entries <= 21);
    CHECK(stats.entries > 0);
    CHECK(stats.hits > 0);

    RunOptions memo_off;
    memo_off.memoize = false;
    dltest::RunResult off = dltest::run_compiled(out.program, memo_off);
    CHECK(off.out == "6765\n");
    CHECK(off.report.memo[1].entries == 0);
    CHECK(off.report.memo[1].hits == 0);

    // unhinted functions never memoize
    std::string plain = "fun fib(n) { if (n < 2) return n; return fib(n - 1) + fib(n - 2); }"
                        "putln(fib(12));";
    dltest::RunResult p = dltest::run_src(plain);
    CHECK(p.report.memo[1].entries == 0);

    // mutable results are recomputed every time
    std::string boxed = "!pure fun box(n) { return [n]; }"
                        "var a = box(1); var b = box(1); b[0] = 9; putln(a[0]);";
    dltest::RunResult bx = dltest::run_src(boxed);
    CHECK(bx.out == "1\n");
    CHECK(bx.report.memo[1].entries == 0);

    // aggregate arguments bypass the cache
    std::string agg = "!pure fun first(a) { return a[0]; }"
                      "putln(first([4])); putln(first([4]));";
    dltest::RunResult ag = dltest::run_src(agg);
    CHECK(ag.out == "4\n4\n");
    CHECK(ag.report.memo[1].entries == 0);
}

TEST_CASE("memoized calls observe distinct keys across argument tags") {
    std::string src = "!pure fun id(x) { return x; } var u;"
                      "putln(id(1)); putln(id(1.0)); putln(id(\"1\")); putln(id(u));"
                      "putln(id(1));";
    dltest::RunResult r = dltest::run_src(src);
    CHECK(r.out == "1\n1\n1\nnil\n1\n");
    CHECK(r.report.memo[1].entries == 4);
    CHECK(r.report.memo[1].hits == 1);
}

TEST_CASE("dispatch counters add up and specialization empties the generic bucket") {
    // locals, not globals: top-level slots read back as any-typed and stay generic
    std::string src = "fun main { var s = 0; var i; for (i = 0; i < 50; i++) s += i;"
                      "putln(s); } main();";
    RunOptions ro;
    dltest::RunResult plain = dltest::run_src(src, dltest::rtl_opts(false, false, false), ro);
    dltest::RunResult opt = dltest::run_src(src, dltest::rtl_opts(true, true, true), ro);
    CHECK(plain.report.counters.dispatched > opt.report.counters.dispatched);

    uint64_t by_op = 0;
    for (uint64_t c : opt.report.counters.per_op) by_op += c;
    CHECK(by_op == opt.report.counters.dispatched);

    CHECK(opt.report.counters.specialized_arith() > 0);
    CHECK(opt.report.counters.generic_arith() == 0);

    dltest::RunResult stack = dltest::run_src(src, dltest::stack_opts(), ro);
    CHECK(stack.report.counters.dispatched > plain.report.counters.dispatched);
}

TEST_CASE("profiler output keeps the fixed header and ends with All Program") {
    std::string src = "fun work { var i; for (i = 0; i < 1000; i++); } work(); work();";
    CompileOutput out = compile_source(src, {});
    RunOptions ro;
    ro.profile = true;
    dltest::RunResult r = dltest::run_compiled(out.program, ro);
    std::string text = format_profile(out.program, r.report.profile);
    CHECK(text.rfind("** Calls *** Time **** Name\n", 0) == 0);
    size_t last_nl = text.find_last_of('\n', text.size() - 2);
    std::string last = text.substr(last_nl + 1);
    CHECK(last.find("All Program") != std::string::npos);
    CHECK(text.find("work") != std::string::npos);
    CHECK(r.report.profile.calls[1] == 2);
}

TEST_CASE("deep but bounded recursion completes on the frame arena") {
    expect_out("fun down(n) { if (n == 0) return 0; return down(n - 1); } putln(down(50000));",
               "0\n");
}
