#include <doctest.h>

#include "dinolite/ast.hpp"
#include "dinolite/diag.hpp"
#include "dinolite/driver.hpp"
#include "test_util.hpp"

using namespace dinolite;

namespace {

CompileError capture(const std::string& src) {
    try {
        compile_source(src, {});
    } catch (const CompileError& e) {
        return e;
    }
    FAIL("expected a compile error");
    return CompileError("", {}, "");
}

} // namespace

TEST_CASE("program compiles to one unit per function plus the entry") {
    CompileOutput out = compile_source("fun f(a) { return a; }\nfun g { return f(1); }\nputln(g());", {});
    REQUIRE(out.program.units.size() == 3);
    CHECK(out.program.units[0].func_id == 0);
    CHECK(out.program.units[1].name == "f");
    CHECK(out.program.units[1].arity == 1);
    CHECK(out.program.units[2].name == "g");
    CHECK(out.program.units[2].arity == 0);
}

TEST_CASE("compile errors carry line and column") {
    CompileError e = capture("var a = 1;\nvar b = c;\n");
    CHECK(e.pos().line == 2);
    CHECK(std::string(e.what()).find("undeclared name 'c'") != std::string::npos);

    e = capture("fun f( { }");
    CHECK(e.pos().line == 1);

    e = capture("var x = \"abc\n\";");
    CHECK(e.stage() == "lex");
}

TEST_CASE("duplicate and reserved declarations are rejected") {
    CHECK_THROWS_AS(compile_source("var a = 1; var a = 2;", {}), CompileError);
    CHECK_THROWS_AS(compile_source("var argv = 3;", {}), CompileError);
    CHECK_THROWS_AS(compile_source("fun putln { }", {}), CompileError);
}

TEST_CASE("hints parse before fun and unknown hints are rejected") {
    CompileOutput out = compile_source("!pure !inline fun f(x) { return x; } putln(f(2));", {});
    CHECK((out.program.units[1].hints & kHintPure) != 0);
    CHECK((out.program.units[1].hints & kHintInline) != 0);

    CompileError e = capture("!fast fun f { }");
    CHECK(std::string(e.what()).find("unknown hint") != std::string::npos);
}

TEST_CASE("negation still works where a hint prefix would be ambiguous") {
    // '!x' followed by something other than fun keeps its meaning as not.
    dltest::RunResult r = dltest::run_src("var x = 0; putln(!x);");
    CHECK(r.out == "1\n");
}

TEST_CASE("builtins are call-only names") {
    CHECK_THROWS_AS(compile_source("var f = putln;", {}), CompileError);
    CHECK_THROWS_AS(compile_source("putln(1, 2);", {}), CompileError); // putln takes one argument
}

TEST_CASE("immutable val bindings reject assignment") {
    CHECK_THROWS_AS(compile_source("val k = 3; k = 4;", {}), CompileError);
    dltest::RunResult r = dltest::run_src("val k = 3; putln(k);");
    CHECK(r.out == "3\n");
}

TEST_CASE("functions may omit the parameter list parentheses") {
    dltest::RunResult r = dltest::run_src("fun hi { putln(\"hi\"); } hi();");
    CHECK(r.out == "hi\n");
}

TEST_CASE("nested functions are visible only inside the enclosing body") {
    dltest::RunResult r = dltest::run_src(
        "fun outer(n) { fun twice(x) { return x + x; } return twice(n); } putln(outer(21));");
    CHECK(r.out == "42\n");
    CHECK_THROWS_AS(
        compile_source("fun outer { fun inner { return 1; } return inner(); } putln(inner());", {}),
        CompileError);
}
