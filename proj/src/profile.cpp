#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "dinolite/vm.hpp"

namespace dinolite {

uint64_t ExecCounters::generic_arith() const {
    uint64_t sum = 0;
    for (int i = 0; i < kOpCount; i++) {
        if (is_generic_arith(static_cast<Op>(i))) sum += per_op[static_cast<size_t>(i)];
    }
    return sum;
}

uint64_t ExecCounters::specialized_arith() const {
    uint64_t sum = 0;
    for (int i = 0; i < kOpCount; i++) {
        if (is_specialized_arith(static_cast<Op>(i))) sum += per_op[static_cast<size_t>(i)];
    }
    return sum;
}

namespace {

std::string profile_row(uint64_t calls, double seconds, const std::string& name) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%8llu %9.2f  --  ",
                  static_cast<unsigned long long>(calls), seconds);
    return buf + name + "\n";
}

std::string unit_label(const Program& prog, const BcUnit& u) {
    if (u.src_line <= 0) return u.name;
    return u.name + ": \"" + prog.source_name + "\": " + std::to_string(u.src_line);
}

} // namespace

std::string format_profile(const Program& prog, const ProfileData& data) {
    std::vector<size_t> order;
    for (size_t i = 1; i < prog.units.size(); i++) order.push_back(i); // skip the entry unit
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        double sa = data.timed ? data.self_seconds[a] : 0.0;
        double sb = data.timed ? data.self_seconds[b] : 0.0;
        if (sa != sb) return sa > sb;
        return data.calls[a] > data.calls[b];
    });

    std::string out = "** Calls *** Time **** Name\n";
    for (size_t i : order) {
        out += profile_row(data.calls[i], data.timed ? data.self_seconds[i] : 0.0,
                           unit_label(prog, prog.units[i]));
    }
    uint64_t total_calls = std::accumulate(data.calls.begin(), data.calls.end(), uint64_t(0));
    out += profile_row(total_calls, data.total_seconds, "All Program");
    return out;
}

std::string format_counters(const ExecCounters& c, const std::vector<MemoFuncStats>& memo,
                            const Program& prog) {
    std::string out;
    out += "dispatched\t" + std::to_string(c.dispatched) + "\n";
    out += "generic_arith\t" + std::to_string(c.generic_arith()) + "\n";
    out += "specialized_arith\t" + std::to_string(c.specialized_arith()) + "\n";
    for (int i = 0; i < kOpCount; i++) {
        uint64_t n = c.per_op[static_cast<size_t>(i)];
        if (n == 0) continue;
        out += "op\t";
        out += op_name(static_cast<Op>(i));
        out += "\t" + std::to_string(n) + "\n";
    }
    for (size_t i = 0; i < memo.size(); i++) {
        if (memo[i].hits == 0 && memo[i].misses == 0 && memo[i].entries == 0) continue;
        out += "memo\t" + prog.units[i].name + "\t" + std::to_string(memo[i].hits) + "\t" +
               std::to_string(memo[i].misses) + "\t" + std::to_string(memo[i].entries) + "\n";
    }
    return out;
}

} // namespace dinolite
