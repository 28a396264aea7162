#pragma once

#include <string>
#include <vector>

#include "dinolite/vm.hpp"

namespace dinolite {

struct LadderRow {
    std::string config;
    bool failed = false;
    double min_seconds = 0.0;
    uint64_t dispatched = 0;
    double dispatch_rate = 0.0; // dispatched / min_seconds
};

// Runs the five-configuration ladder over one source program: stack form,
// plain register-transfer, +combine, +specialize+inline, +memoize. Each
// config runs `repeats` times and keeps the minimum wall time; dispatch
// counts are deterministic per config. Guest output is swallowed. A config
// that exits nonzero is marked failed.
std::vector<LadderRow> bench_ladder(std::string_view src, const std::string& source_name,
                                    const std::vector<std::string>& argv, int repeats);

// TSV rendering: header line, then config, min-seconds, dispatches,
// dispatches-per-second per row (FAILED in the time column for failed rows).
std::string ladder_tsv(const std::vector<LadderRow>& rows);

} // namespace dinolite
