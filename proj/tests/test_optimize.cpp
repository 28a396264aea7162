#include <doctest.h>

#include <string>

#include "dinolite/bc_text.hpp"
#include "dinolite/opcode.hpp"
#include "dinolite/optimizer.hpp"
#include "test_util.hpp"

using namespace dinolite;

namespace {

std::string dump_of(const std::string& src, CompileOptions copts) {
    return dump_text(compile_source(src, copts).program);
}

int count_op(const Program& prog, Op op) {
    int n = 0;
    for (const BcUnit& u : prog.units)
        for (const RtlInstr& in : u.rtl)
            if (in.op == op) n++;
    return n;
}

const char* kEmptyLoop = "fun main { var i; var n = 1000; for (i = 0; i < n; i++); } main();";

} // namespace

TEST_CASE("combining collapses an empty counted loop to one self-branch") {
    CompileOutput out = compile_source(kEmptyLoop, dltest::rtl_opts(true, false, false));
    const BcUnit& main_fn = out.program.units[1];
    int found = 0;
    for (size_t i = 0; i < main_fn.rtl.size(); i++) {
        if (main_fn.rtl[i].op == Op::btltinc) {
            found++;
            CHECK(main_fn.rtl[i].pc == int32_t(i)); // the loop is this single instruction
        }
    }
    CHECK(found == 1);
    // and the loop still counts correctly
    dltest::RunResult r = dltest::run_src("var i; for (i = 0; i < 7; i++); putln(i);",
                                          dltest::rtl_opts(true, false, false));
    CHECK(r.out == "7\n");
}

TEST_CASE("specialize turns the fused loop branch into its int form") {
    CompileOutput out = compile_source(kEmptyLoop, dltest::rtl_opts(true, true, false));
    CHECK(count_op(out.program, Op::ibtltinc) == 1);
    CHECK(count_op(out.program, Op::btltinc) == 0);
}

TEST_CASE("branch-if-false fusion inverts the comparison") {
    // while (a < b) with a non-empty body compiles to an entry bf test; the
    // fused form must flip lt into ge.
    std::string src = "var a = 0; var b = 3; while (a < b) { a = a + 1; } putln(a);";
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, false, false));
    CHECK(count_op(out.program, Op::btge) >= 1);
    CHECK(count_op(out.program, Op::lt) == 0);
    CHECK(dltest::run_compiled(out.program).out == "3\n");
}

TEST_CASE("comparison results that stay live block branch-if-false fusion") {
    // t is a named local read after the branch, so cmp+bf must stay split.
    std::string src = "var t = 1 < 2;\nif (t) { putln(\"y\"); }\nputln(t);";
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, false, false));
    CHECK(count_op(out.program, Op::lt) == 1);
    dltest::RunResult r = dltest::run_compiled(out.program);
    CHECK(r.out == "y\n1\n");
}

TEST_CASE("a jump target between compare and branch blocks fusion") {
    // Instruction 3 is entered both by fallthrough from the compare and by
    // the jmp at 4, so rewriting the pair would skip the side entry's test.
    const char* text = ".globals n=0\n"
                       ".func name=main id=0 arity=0 nslots=3 hints=0\n"
                       "0 ldi op1=0 imm=0\n"
                       "1 ldi op1=1 imm=3\n"
                       "2 lt op1=2 op2=0 op3=1\n"
                       "3 bt op1=2 pc=6\n"
                       "4 jmp pc=3\n"
                       "5 ldnil op1=2\n"
                       "6 ret op1=2\n"
                       ".end\n";
    Program prog = parse_text(text, "<hand>");
    CombineStats s = combine_unit(prog.units[0]);
    CHECK(s.cmp_branch == 0);
    CHECK(prog.units[0].rtl[2].op == Op::lt);
}

TEST_CASE("specialization leaves mixed-type slots generic") {
    std::string src =
        "var x = 1;\nif (len(argv) > 0) x = 1.5;\nvar y = x + 1;\nputln(y);";
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, true, false));
    // x may be int or float at the add, so the generic opcode must survive.
    bool generic_add = false;
    for (const RtlInstr& in : out.program.units[0].rtl)
        if (in.op == Op::add || in.op == Op::addi) generic_add = true;
    CHECK(generic_add);
    CHECK(dltest::run_compiled(out.program).out == "2\n");
}

TEST_CASE("specialized opcodes still check tags at runtime") {
    // Feed the specialized loop branch a nil bound by editing the loaded
    // program; it must raise instead of reading garbage.
    CompileOutput out = compile_source(kEmptyLoop, dltest::rtl_opts(true, true, false));
    Program prog = parse_text(dump_text(out.program), "<edited>");
    // overwrite the loop bound with nil before entry
    int edited = 0;
    for (BcUnit& u : prog.units) {
        for (RtlInstr& in : u.rtl) {
            if (in.op == Op::ldi && in.imm == 1000) {
                in.op = Op::ldnil;
                edited++;
            }
        }
    }
    REQUIRE(edited == 1);
    dltest::RunResult r = dltest::run_compiled(prog);
    CHECK(r.exit_code == 70);
    CHECK(r.error.find("specialized") != std::string::npos);
}

TEST_CASE("inlining splices hinted callees and keeps semantics") {
    std::string src = "!inline fun step(x) { return x + 1; }\n"
                      "fun main { var i; var x = 0; for (i = 0; i < 5; i++) x = step(x); putln(x); }\n"
                      "main();";
    CompileOutput off = compile_source(src, dltest::rtl_opts(false, false, false));
    CompileOutput on = compile_source(src, dltest::rtl_opts(false, false, true));
    CHECK(count_op(off.program, Op::call) > count_op(on.program, Op::call));
    CHECK(on.report.inlined_calls == 1);
    CHECK(dltest::run_compiled(on.program).out == "5\n");
    CHECK(dltest::run_compiled(off.program).out == "5\n");
}

TEST_CASE("inlining skips recursive callees and respects the site limit") {
    std::string rec = "!inline fun f(n) { if (n < 1) return 0; return f(n - 1) + 1; } putln(f(3));";
    CompileOutput out = compile_source(rec, dltest::rtl_opts(false, false, true));
    CHECK(out.report.inlined_calls == 0);
    CHECK(dltest::run_compiled(out.program).out == "3\n");

    std::string many = "!inline fun id(x) { return x; }\n"
                       "putln(id(1) + id(2) + id(3));";
    CompileOptions limited = dltest::rtl_opts(false, false, true);
    limited.opt.inline_limit = 2;
    CompileOutput lim = compile_source(many, limited);
    CHECK(lim.report.inlined_calls == 2);
    CHECK(dltest::run_compiled(lim.program).out == "6\n");
}

TEST_CASE("functions without the hint are never inlined") {
    std::string src = "fun step(x) { return x + 1; } putln(step(41));";
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, true, true));
    CHECK(out.report.inlined_calls == 0);
    CHECK(count_op(out.program, Op::call) == 1);
}

TEST_CASE("inlined callees with branchy locals still start fresh") {
    // y is only written on one path in the callee; the splice must reset it
    // so the second inlined call cannot observe the first call's value.
    std::string src = "!inline fun pick(flag) { var y; if (flag) y = 9; return y; }\n"
                      "putln(type(pick(1)));\nputln(type(pick(0)));";
    for (bool inl : {false, true}) {
        dltest::RunResult r = dltest::run_src(src, dltest::rtl_opts(true, true, inl));
        CHECK(r.out == "int\nnil\n");
    }
}

TEST_CASE("optimizer report lists per-function counts as TSV") {
    std::string src = "!inline fun step(x) { return x + 1; }\n"
                      "fun main { var i; var x = 0; for (i = 0; i < 5; i++) x = step(x); putln(x); }\n"
                      "main();";
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, true, true));
    std::string tsv = out.report.tsv();
    CHECK(tsv.rfind("function\tinstrs-before\tinstrs-after\tspecialized\tcombined\tinlined\n", 0) ==
          0);
    CHECK(tsv.find("\nmain\t") != std::string::npos);
    CHECK(out.report.specialized_ops > 0);
    CHECK(out.report.combined_cmp_branch + out.report.combined_inc_branch > 0);
}

TEST_CASE("optimized and plain compiles agree across a grab bag of programs") {
    const char* programs[] = {
        "var s = 0; var i; for (i = 0; i < 10; i++) s += i; putln(s);",
        "var x = 2.5; var i; for (i = 0; i < 4; i++) x = x * 2.0; putln(x);",
        "fun f(a, b) { return a * 10 + b; } putln(f(3, 4));",
        "var t = tab[\"a\": 1]; t[\"b\"] = 2; putln(len(t));",
    };
    for (const char* src : programs) {
        dltest::RunResult plain = dltest::run_src(src, dltest::rtl_opts(false, false, false));
        dltest::RunResult full = dltest::run_src(src, dltest::rtl_opts(true, true, true));
        CHECK(plain.out == full.out);
        CHECK(plain.exit_code == full.exit_code);
    }
}
