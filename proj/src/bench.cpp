#include "dinolite/bench.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "dinolite/driver.hpp"

namespace dinolite {

namespace {

// Discards guest output so timing measures interpretation, not I/O.
class NullBuf : public std::streambuf {
  protected:
    int overflow(int c) override { return c; }
    std::streamsize xsputn(const char*, std::streamsize n) override { return n; }
};

struct LadderConfig {
    const char* name;
    VmKind vm;
    OptFlags opt;
    bool memoize;
};

std::vector<LadderConfig> ladder_configs() {
    OptFlags off{false, false, false, 64};
    OptFlags combine_only{true, false, false, 64};
    OptFlags no_memo_full{true, true, true, 64};
    return {
        {"stack", VmKind::Stack, off, false},
        {"rtl", VmKind::Rtl, off, false},
        {"rtl+combine", VmKind::Rtl, combine_only, false},
        {"rtl+combine+specialize+inline", VmKind::Rtl, no_memo_full, false},
        {"rtl+all+memoize", VmKind::Rtl, no_memo_full, true},
    };
}

} // namespace

std::vector<LadderRow> bench_ladder(std::string_view src, const std::string& source_name,
                                    const std::vector<std::string>& argv, int repeats) {
    if (repeats < 1) repeats = 1;
    std::vector<LadderRow> rows;

    for (const LadderConfig& cfg : ladder_configs()) {
        CompileOptions copts;
        copts.vm = cfg.vm;
        copts.opt = cfg.opt;
        copts.source_name = source_name;
        Program prog = compile_source(src, copts).program;

        RunOptions ropts;
        ropts.argv = argv;
        ropts.memoize = cfg.memoize;

        LadderRow row;
        row.config = cfg.name;
        for (int r = 0; r < repeats; r++) {
            NullBuf sink;
            std::ostream null_out(&sink);
            ExitReport rep = run_program(prog, ropts, null_out);
            if (rep.exit_code != 0) {
                row.failed = true;
                break;
            }
            double secs = rep.profile.total_seconds;
            if (r == 0 || secs < row.min_seconds) row.min_seconds = secs;
            row.dispatched = rep.counters.dispatched;
        }
        if (!row.failed && row.min_seconds > 0.0) {
            row.dispatch_rate = static_cast<double>(row.dispatched) / row.min_seconds;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string ladder_tsv(const std::vector<LadderRow>& rows) {
    std::string out = "config\tmin-seconds\tdispatches\tdispatches-per-second\n";
    char buf[64];
    for (const LadderRow& r : rows) {
        out += r.config;
        out += '\t';
        if (r.failed) {
            out += "FAILED\t0\t0\n";
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%.6f", r.min_seconds);
        out += buf;
        out += '\t' + std::to_string(r.dispatched) + '\t';
        std::snprintf(buf, sizeof(buf), "%.0f", r.dispatch_rate);
        out += buf;
        out += '\n';
    }
    return out;
}

} // namespace dinolite
