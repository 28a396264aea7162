#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "dinolite/bytecode.hpp"
#include "dinolite/value.hpp"

namespace dinolite {

struct ExecCounters {
    uint64_t dispatched = 0;
    std::array<uint64_t, 256> per_op{};

    // Sums over the opcodes that have (or are) typed variants; used to report
    // how much arithmetic still runs through generic dispatch.
    uint64_t generic_arith() const;
    uint64_t specialized_arith() const;
};

struct ProfileData {
    std::vector<uint64_t> calls;       // per function id; always collected
    std::vector<double> self_seconds;  // only populated when timing is on
    double total_seconds = 0.0;
    bool timed = false;
};

struct MemoFuncStats {
    uint64_t hits = 0;
    uint64_t misses = 0;
    uint64_t entries = 0; // cache size at exit
};

// Observed operand tags, for checking inference soundness: one bitmask
// (1 << Tag) per enumerated input of every instruction.
struct TypeRecord {
    std::vector<std::vector<std::vector<uint8_t>>> input_tags; // [func][instr][input]
};

struct RunOptions {
    bool memoize = true;      // honor !pure hints (register-transfer VM only)
    bool profile = false;     // collect per-function self time
    bool record_types = false;
    std::vector<std::string> argv;
};

struct ExitReport {
    int exit_code = 0;
    std::string error; // runtime error message when exit_code is 70
    ExecCounters counters;
    ProfileData profile;
    std::vector<MemoFuncStats> memo; // per function id
    TypeRecord types;                // populated when record_types
};

// Executes a program. Guest output goes to `out`; diagnostics are returned in
// the report, not printed. The VM keeps no global state, so concurrent runs
// of different programs are independent.
ExitReport run_program(const Program& prog, const RunOptions& opts, std::ostream& out);

// Renders the profile table: a fixed header, one row per non-entry function
// sorted by self time (all declared functions appear, even uncalled ones),
// and a closing whole-program row.
std::string format_profile(const Program& prog, const ProfileData& data);

// Renders the execution counters as tab-separated lines.
std::string format_counters(const ExecCounters& c, const std::vector<MemoFuncStats>& memo,
                            const Program& prog);

// Frame depth limit; exceeding it raises a runtime error instead of crashing.
constexpr size_t kMaxCallDepth = 100000;

} // namespace dinolite
