#include <doctest.h>

#include <string>

#include "dinolite/cfg.hpp"
#include "dinolite/infer.hpp"
#include "test_util.hpp"

using namespace dinolite;

namespace {

// Runs with the recorder on and checks every observed operand tag set
// against what inference predicted. Returns the number of checked operands.
size_t check_sound(const std::string& src, const std::vector<std::string>& argv = {}) {
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, true, true));
    RunOptions ro;
    ro.record_types = true;
    ro.argv = argv;
    dltest::RunResult r = dltest::run_compiled(out.program, ro);
    REQUIRE(r.exit_code == 0);

    size_t checked = 0;
    for (size_t u = 0; u < out.program.units.size(); u++) {
        const BcUnit& unit = out.program.units[u];
        InferResult inf = infer_types(unit, Cfg::build(unit));
        const auto& recorded = r.report.types.input_tags[u];
        REQUIRE(recorded.size() == unit.rtl.size());
        for (size_t i = 0; i < recorded.size(); i++) {
            REQUIRE(recorded[i].size() == inf.inputs[i].size());
            for (size_t k = 0; k < recorded[i].size(); k++) {
                // every tag seen at runtime must be in the static prediction
                CHECK_MESSAGE((recorded[i][k] & ~inf.inputs[i][k]) == 0,
                              "unit ", unit.name, " instr ", i, " input ", k);
                if (recorded[i][k]) checked++;
            }
        }
    }
    return checked;
}

} // namespace

TEST_CASE("masks join and single-tag checks behave") {
    CHECK(mask_of(Tag::Int) == kMaskInt);
    CHECK(mask_single(kMaskInt));
    CHECK(!mask_single(kMaskInt | kMaskFloat));
    CHECK(!mask_single(0));
    CHECK((kMaskAny & kMaskNil) != 0);
}

TEST_CASE("recorded tags are a subset of inferred tags on mixed programs") {
    CHECK(check_sound("var s = 0; var i; for (i = 0; i < 20; i++) s += i; putln(s);") > 0);
    CHECK(check_sound("var x = 1; if (len(argv) > 0) x = 2.5; putln(x + 1);") > 0);
    CHECK(check_sound("var x = 1; if (len(argv) > 0) x = 2.5; putln(x + 1);", {"z"}) > 0);
    CHECK(check_sound("fun f(a) { return a + a; } putln(f(2)); putln(f(\"ab\"));") > 0);
    CHECK(check_sound("var t = tab[1: \"one\"]; putln(t[1]);") > 0);
    CHECK(check_sound("var y; putln(type(y));") > 0);
}

TEST_CASE("parameters start as any and locals start as nil") {
    CompileOutput out = compile_source("fun f(a) { var b; return a; } putln(f(1));", {});
    const BcUnit& f = out.program.units[1];
    InferResult inf = infer_types(f, Cfg::build(f));
    // `return a` reads the unconstrained parameter; the implicit fall-off
    // return reads a slot that can only hold nil
    bool saw_param_ret = false;
    bool saw_nil_ret = false;
    for (size_t i = 0; i < f.rtl.size(); i++) {
        if (f.rtl[i].op == Op::ret) {
            REQUIRE(inf.inputs[i].size() == 1);
            if (inf.inputs[i][0] == kMaskAny) saw_param_ret = true;
            if (inf.inputs[i][0] == kMaskNil) saw_nil_ret = true;
        }
    }
    CHECK(saw_param_ret);
    CHECK(saw_nil_ret);
}

TEST_CASE("literal assignment pins a slot to one tag across a loop") {
    CompileOutput out =
        compile_source("fun main { var i; for (i = 0; i < 3; i++); } main();",
                       dltest::rtl_opts(false, false, false));
    const BcUnit& main_fn = out.program.units[1];
    InferResult inf = infer_types(main_fn, Cfg::build(main_fn));
    for (size_t i = 0; i < main_fn.rtl.size(); i++) {
        const RtlInstr& in = main_fn.rtl[i];
        if (is_cmp(in.op) || in.op == Op::addi) {
            for (uint8_t m : inf.inputs[i]) CHECK(m == kMaskInt);
        }
    }
}

TEST_CASE("a call result stays unconstrained") {
    CompileOutput out =
        compile_source("fun f { return 1; } var x = f(); putln(x + 0);", dltest::rtl_opts(false, false, false));
    const BcUnit& entry = out.program.units[0];
    InferResult inf = infer_types(entry, Cfg::build(entry));
    bool saw_add = false;
    for (size_t i = 0; i < entry.rtl.size(); i++) {
        const RtlInstr& in = entry.rtl[i];
        if (in.op == Op::add || in.op == Op::addi) {
            saw_add = true;
            CHECK(inf.inputs[i][0] == kMaskAny);
        }
    }
    CHECK(saw_add);
}
