#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dinolite/bc_text.hpp"
#include "dinolite/bench.hpp"
#include "dinolite/driver.hpp"
#include "dinolite/vm.hpp"

namespace py = pybind11;
using namespace dinolite;

namespace {

CompileOptions make_opts(const std::string& vm, bool combine, bool specialize, bool inline_calls,
                         int inline_limit, const std::string& source_name) {
    CompileOptions o;
    o.vm = vm == "stack" ? VmKind::Stack : VmKind::Rtl;
    o.opt.combine = combine;
    o.opt.specialize = specialize;
    o.opt.inline_calls = inline_calls;
    o.opt.inline_limit = inline_limit;
    o.source_name = source_name;
    return o;
}

py::dict execute(const Program& prog, const std::vector<std::string>& argv, bool memoize,
                 bool profile) {
    RunOptions ro;
    ro.memoize = memoize && prog.is_rtl;
    ro.profile = profile;
    ro.argv = argv;
    std::ostringstream out;
    ExitReport rep = run_program(prog, ro, out);

    py::dict d;
    d["exit_code"] = rep.exit_code;
    d["stdout"] = out.str();
    d["error"] = rep.error;
    d["dispatched"] = rep.counters.dispatched;
    if (profile) d["profile"] = format_profile(prog, rep.profile);
    uint64_t hits = 0, entries = 0;
    for (const MemoFuncStats& m : rep.memo) {
        hits += m.hits;
        entries += m.entries;
    }
    d["memo_hits"] = hits;
    d["memo_entries"] = entries;
    return d;
}

py::dict run(const std::string& src, const std::vector<std::string>& argv, const std::string& vm,
             bool combine, bool specialize, bool inline_calls, bool memoize, bool profile,
             int inline_limit) {
    CompileOutput out =
        compile_source(src, make_opts(vm, combine, specialize, inline_calls, inline_limit, "<python>"));
    return execute(out.program, argv, memoize, profile);
}

std::string dump(const std::string& src, bool combine, bool specialize, bool inline_calls,
                 int inline_limit) {
    CompileOutput out =
        compile_source(src, make_opts("rtl", combine, specialize, inline_calls, inline_limit, "<python>"));
    return dump_text(out.program);
}

py::dict run_dump(const std::string& text, const std::vector<std::string>& argv, bool memoize) {
    Program prog = parse_text(text, "<dump>");
    return execute(prog, argv, memoize, false);
}

std::string bench(const std::string& src, const std::vector<std::string>& argv, int repeat) {
    return ladder_tsv(bench_ladder(src, "<python>", argv, repeat));
}

} // namespace

PYBIND11_MODULE(_dinolite, m) {
    m.doc() = "dinolite interpreter core";

    m.def("run", &run, py::arg("src"), py::arg("argv") = std::vector<std::string>{},
          py::arg("vm") = "rtl", py::arg("combine") = true, py::arg("specialize") = true,
          py::arg("inline_calls") = true, py::arg("memoize") = true, py::arg("profile") = false,
          py::arg("inline_limit") = 64,
          "Compile and execute source; returns exit_code/stdout/error plus counters.");

    m.def("dump", &dump, py::arg("src"), py::arg("combine") = false,
          py::arg("specialize") = false, py::arg("inline_calls") = false,
          py::arg("inline_limit") = 64, "Compile source and return the bytecode text dump.");

    m.def("run_dump", &run_dump, py::arg("text"), py::arg("argv") = std::vector<std::string>{},
          py::arg("memoize") = true, "Parse a bytecode text dump and execute it.");

    m.def("bench", &bench, py::arg("src"), py::arg("argv") = std::vector<std::string>{},
          py::arg("repeat") = 3, "Run the five-config ladder and return the TSV report.");
}
