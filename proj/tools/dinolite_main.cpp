#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dinolite/bc_text.hpp"
#include "dinolite/bench.hpp"
#include "dinolite/diag.hpp"
#include "dinolite/driver.hpp"
#include "dinolite/vm.hpp"

namespace {

using namespace dinolite;

struct RunArgs {
    std::string file;
    std::vector<std::string> guest_argv;
    std::string vm = "rtl";
    bool combine = true;
    bool specialize = true;
    bool inline_calls = true;
    bool memoize = true;
    int inline_limit = 64;
    bool count = false;
    bool profile = false;
    bool opt_report = false;
    std::string dump_bc;
};

struct DumpArgs {
    std::string file;
    bool combine = false;
    bool specialize = false;
    bool inline_calls = false;
    int inline_limit = 64;
    std::string output;
};

struct BenchArgs {
    std::string file;
    std::vector<std::string> guest_argv;
    int repeat = 3;
};

int usage_error(const std::string& msg) {
    std::cerr << "usage error: " << msg << "\n";
    return kExitUsage;
}

void add_pass_flags(CLI::App* cmd, bool& combine, bool& specialize, bool& inl, int& limit) {
    cmd->add_flag("--combine,!--no-combine", combine, "fuse compare/step+branch pairs");
    cmd->add_flag("--specialize,!--no-specialize", specialize, "rewrite type-stable opcodes");
    cmd->add_flag("--inline,!--no-inline", inl, "expand calls to !inline functions");
    cmd->add_option("--inline-limit", limit, "max inlined call sites per program")
        ->envname("DINOLITE_INLINE_LIMIT")
        ->check(CLI::NonNegativeNumber);
}

int cmd_run(const CLI::App* cmd, const RunArgs& a) {
    bool stack = a.vm == "stack";
    bool pass_flag_given = cmd->count("--combine") || cmd->count("--specialize") ||
                           cmd->count("--inline") || cmd->count("--inline-limit");
    if (stack && (pass_flag_given || cmd->count("--memoize") || cmd->count("--dump-bc") ||
                  cmd->count("--opt-report")))
        return usage_error("optimizer flags apply to the register-transfer vm only");
    if (is_dump_path(a.file)) {
        if (stack) return usage_error("bytecode dumps run on the register-transfer vm only");
        if (pass_flag_given)
            return usage_error("bytecode dumps are loaded as-is; optimizer flags apply to source input");
    }

    CompileOptions copts;
    copts.vm = stack ? VmKind::Stack : VmKind::Rtl;
    copts.opt.combine = a.combine;
    copts.opt.specialize = a.specialize;
    copts.opt.inline_calls = a.inline_calls;
    copts.opt.inline_limit = a.inline_limit;
    CompileOutput out = load_program(a.file, copts);

    if (!a.dump_bc.empty()) {
        std::ofstream f(a.dump_bc, std::ios::binary);
        if (!f) return usage_error("cannot write " + a.dump_bc);
        f << dump_text(out.program);
    }
    if (a.opt_report) std::cerr << out.report.tsv();

    RunOptions ropts;
    ropts.memoize = a.memoize && !stack;
    ropts.profile = a.profile;
    ropts.argv = a.guest_argv;
    ExitReport rep = run_program(out.program, ropts, std::cout);

    if (rep.exit_code != 0) std::cerr << rep.error << "\n";
    if (a.profile) std::cerr << format_profile(out.program, rep.profile);
    if (a.count) std::cerr << format_counters(rep.counters, rep.memo, out.program);
    return rep.exit_code;
}

int cmd_dump(const CLI::App* cmd, const DumpArgs& a) {
    if (is_dump_path(a.file) &&
        (cmd->count("--combine") || cmd->count("--specialize") || cmd->count("--inline") ||
         cmd->count("--inline-limit")))
        return usage_error("bytecode dumps are loaded as-is; optimizer flags apply to source input");
    CompileOptions copts;
    copts.opt.combine = a.combine;
    copts.opt.specialize = a.specialize;
    copts.opt.inline_calls = a.inline_calls;
    copts.opt.inline_limit = a.inline_limit;
    CompileOutput out = load_program(a.file, copts);
    std::string text = dump_text(out.program);
    if (a.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(a.output, std::ios::binary);
        if (!f) return usage_error("cannot write " + a.output);
        f << text;
    }
    return kExitOk;
}

int cmd_bench(const BenchArgs& a) {
    if (is_dump_path(a.file))
        return usage_error("bench compiles every ladder config from source; pass a .dl file");
    std::string src = read_file(a.file);
    std::vector<LadderRow> rows = bench_ladder(src, a.file, a.guest_argv, a.repeat);
    std::cout << ladder_tsv(rows);
    for (const LadderRow& r : rows)
        if (r.failed) return kExitRuntime;
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dinolite: a small dynamic language with a two-stage bytecode interpreter"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "compile and execute a program");
    run->add_option("file", run_args.file, "source (.dl) or bytecode dump (.dlb)")->required();
    run->add_option("args", run_args.guest_argv, "strings exposed to the program as argv");
    run->add_option("--vm", run_args.vm, "execution engine")
        ->check(CLI::IsMember({"stack", "rtl"}))
        ->capture_default_str();
    add_pass_flags(run, run_args.combine, run_args.specialize, run_args.inline_calls,
                   run_args.inline_limit);
    run->add_flag("--memoize,!--no-memoize", run_args.memoize, "cache results of !pure calls");
    run->add_flag("--count", run_args.count, "print dispatch and memo counters to stderr");
    run->add_flag("-p", run_args.profile, "print the call/time profile to stderr");
    run->add_option("--dump-bc", run_args.dump_bc, "also write the bytecode text dump here");
    run->add_flag("--opt-report", run_args.opt_report, "print per-function optimizer stats to stderr");

    DumpArgs dump_args;
    CLI::App* dump = app.add_subcommand("dump", "compile and print the bytecode text form");
    dump->add_option("file", dump_args.file, "source (.dl) or bytecode dump (.dlb)")->required();
    add_pass_flags(dump, dump_args.combine, dump_args.specialize, dump_args.inline_calls,
                   dump_args.inline_limit);
    dump->add_option("-o,--output", dump_args.output, "write here instead of stdout");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "time the five-config optimization ladder");
    bench->add_option("file", bench_args.file, "source program (.dl)")->required();
    bench->add_option("args", bench_args.guest_argv, "strings exposed to the program as argv");
    bench->add_option("--repeat", bench_args.repeat, "runs per config; the minimum time is kept")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (run->parsed()) return cmd_run(run, run_args);
        if (dump->parsed()) return cmd_dump(dump, dump_args);
        return cmd_bench(bench_args);
    } catch (const CompileError& e) {
        std::cerr << e.what() << "\n";
        return kExitCompile;
    } catch (const RuntimeError& e) {
        std::cerr << e.what() << "\n";
        return kExitRuntime;
    }
}
