#include <doctest.h>

#include <cstdlib>
#include <string>

#include "test_util.hpp"

using namespace dinolite;

// Floor for dispatched instructions per second on the optimized rtl vm.
// Generous on purpose: the point is catching accidental slow paths in the
// dispatch loop (boxing, logging, virtual calls), not scoring the host.
// Override with DINOLITE_MIN_DISPATCH_RATE for unusually slow machines.
TEST_CASE("optimized dispatch sustains tens of millions of instructions per second") {
    double floor = 50e6;
    if (const char* env = std::getenv("DINOLITE_MIN_DISPATCH_RATE")) floor = std::atof(env);

    std::string src = "fun main { var i; var n = 20000000; for (i = 0; i < n; i++); } main();";
    CompileOutput out = compile_source(src, dltest::rtl_opts(true, true, true));
    RunOptions ro;
    ro.profile = true; // gives total_seconds
    dltest::RunResult best;
    double rate = 0;
    for (int rep = 0; rep < 3; rep++) {
        dltest::RunResult r = dltest::run_compiled(out.program, ro);
        REQUIRE(r.exit_code == 0);
        double secs = r.report.profile.total_seconds;
        REQUIRE(secs > 0);
        rate = std::max(rate, double(r.report.counters.dispatched) / secs);
    }
    CHECK_MESSAGE(rate >= floor, "dispatch rate ", rate, " below floor ", floor);
}
