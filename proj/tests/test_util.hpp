#pragma once

#include <sstream>
#include <string>
#include <utility>

#include "dinolite/driver.hpp"
#include "dinolite/vm.hpp"

namespace dltest {

using namespace dinolite;

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string error;
    ExitReport report;
};

inline RunResult run_compiled(const Program& prog, RunOptions ropts = {}) {
    std::ostringstream out;
    ExitReport rep = run_program(prog, ropts, out);
    RunResult r;
    r.exit_code = rep.exit_code;
    r.out = out.str();
    r.error = rep.error;
    r.report = std::move(rep);
    return r;
}

inline RunResult run_src(const std::string& src, CompileOptions copts = {}, RunOptions ropts = {}) {
    CompileOutput c = compile_source(src, copts);
    return run_compiled(c.program, std::move(ropts));
}

inline CompileOptions stack_opts() {
    CompileOptions o;
    o.vm = VmKind::Stack;
    return o;
}

inline CompileOptions rtl_opts(bool combine, bool specialize, bool inline_calls) {
    CompileOptions o;
    o.opt.combine = combine;
    o.opt.specialize = specialize;
    o.opt.inline_calls = inline_calls;
    return o;
}

} // namespace dltest
