#include <doctest.h>

#include <set>
#include <string>

#include "dinolite/bc_text.hpp"
#include "dinolite/diag.hpp"
#include "dinolite/opcode.hpp"
#include "test_util.hpp"

using namespace dinolite;

TEST_CASE("opcode table is dense, named and form-consistent") {
    REQUIRE(kOpCount < 256);
    std::set<std::string> rtl_names;
    std::set<std::string> stack_names;
    for (int i = 0; i < kOpCount; i++) {
        Op op = Op(i);
        const OpInfo& info = op_info(op);
        REQUIRE(info.name != nullptr);
        bool inserted = info.form == OpForm::Rtl ? rtl_names.insert(info.name).second
                                                 : stack_names.insert(info.name).second;
        CHECK_MESSAGE(inserted, "duplicate name within a form: ", info.name);
        CHECK(op_by_name(info.name, std::string(info.name).size(), info.form) == i);
    }
}

TEST_CASE("specialization and inversion mappings stay inside the comparison family") {
    CHECK(int_variant(Op::add) == Op::iadd);
    CHECK(float_variant(Op::add) == Op::fadd);
    CHECK(float_variant(Op::mod) == Op::mod); // no float form
    CHECK(inverted_cmp(Op::lt) == Op::ge);
    CHECK(inverted_cmp(Op::ige) == Op::ilt);
    CHECK(fused_branch_of_cmp(Op::ilt) == Op::ibtlt);
    for (int i = 0; i < kOpCount; i++) {
        Op op = Op(i);
        if (!is_cmp(op)) continue;
        CHECK(is_cmp(inverted_cmp(op)));
        CHECK(inverted_cmp(inverted_cmp(op)) == op);
        CHECK(is_fused_branch(fused_branch_of_cmp(op)));
    }
}

static const char* kFibSrc =
    "!pure fun fib(n) { if (n < 2) return n; return fib(n - 1) + fib(n - 2); }\n"
    "putln(fib(12));\n";

TEST_CASE("dump, parse, dump is a fixed point") {
    for (bool optimized : {false, true}) {
        CompileOutput out =
            compile_source(kFibSrc, dltest::rtl_opts(optimized, optimized, optimized));
        std::string first = dump_text(out.program);
        Program back = parse_text(first, "<test>");
        CHECK(dump_text(back) == first);
    }
}

TEST_CASE("a parsed dump runs exactly like the source") {
    CompileOutput out = compile_source(kFibSrc, {});
    dltest::RunResult direct = dltest::run_compiled(out.program);
    Program loaded = parse_text(dump_text(out.program), "<test>");
    dltest::RunResult from_dump = dltest::run_compiled(loaded);
    CHECK(direct.out == "144\n");
    CHECK(from_dump.out == direct.out);
    CHECK(from_dump.exit_code == direct.exit_code);
}

TEST_CASE("unoptimized dumps contain no fused or specialized opcodes") {
    CompileOutput out = compile_source("var i; for (i = 0; i < 9; i++); putln(i);",
                                       dltest::rtl_opts(false, false, false));
    std::string text = dump_text(out.program);
    CHECK(text.find("btltinc") == std::string::npos);
    CHECK(text.find("iadd") == std::string::npos);
    CHECK(text.find("ibt") == std::string::npos);
}

TEST_CASE("dump parser reports malformed input with a line number") {
    auto bad = [](const std::string& text) {
        try {
            parse_text(text, "<bad>");
        } catch (const CompileError& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    CHECK(bad("nonsense").find("bytecode-text") != std::string::npos);
    CHECK(bad(".globals n=0\n.func name=f id=1 arity=0 nslots=0 hints=0\n.end\n")
              .find("dense") != std::string::npos);
    CHECK(bad(".globals n=0\n.func name=f id=0 arity=0 nslots=1 hints=0\n0 frobnicate op1=0\n.end\n")
              .find("unknown opcode") != std::string::npos);
    CHECK(bad(".globals n=0\n.func name=f id=0 arity=0 nslots=1 hints=0\n0 ldnil op1=0\n")
              .find("missing .end") != std::string::npos);
    // validate() rejects branches outside the unit.
    CHECK(bad(".globals n=0\n.func name=f id=0 arity=0 nslots=1 hints=0\n0 jmp pc=7\n.end\n") !=
          "");
}

TEST_CASE("stack and rtl forms carry code in their own vectors") {
    CompileOutput rtl = compile_source("putln(1);", {});
    CHECK(rtl.program.is_rtl);
    CHECK(!rtl.program.units[0].rtl.empty());
    CHECK(rtl.program.units[0].stack.empty());

    CompileOutput stack = compile_source("putln(1);", dltest::stack_opts());
    CHECK(!stack.program.is_rtl);
    CHECK(stack.program.units[0].rtl.empty());
    CHECK(!stack.program.units[0].stack.empty());
}
