#pragma once

#include <string>

#include "dinolite/bytecode.hpp"

namespace dinolite {

struct OptFlags {
    bool combine = true;
    bool specialize = true;
    bool inline_calls = true;
    int inline_limit = 64; // total inlined call sites per program
};

struct OptUnitRow {
    std::string name;
    int instrs_before = 0;
    int instrs_after = 0;
    int specialized = 0;
    int combined = 0; // fused pairs of both kinds
    int inlined = 0;  // call sites expanded inside this function
};

struct OptReport {
    int inlined_calls = 0;
    int combined_cmp_branch = 0; // compare + branch fusions
    int combined_inc_branch = 0; // step + fused-branch fusions
    int specialized_ops = 0;
    std::vector<OptUnitRow> units;

    // Tab-separated per-function table with a header row.
    std::string tsv() const;
};

struct CombineStats {
    int cmp_branch = 0;
    int inc_branch = 0;
};

// Fuses adjacent instruction pairs into superinstructions: a comparison
// feeding a conditional branch becomes one fused branch (inverting the
// comparison for branch-if-false), and an in-place immediate add targeted by
// its own fused less-than branch becomes the self-looping step instruction.
CombineStats combine_unit(BcUnit& unit);

// Rewrites generic opcodes to typed variants wherever inference pins every
// operand to one tag. Returns the number of rewritten instructions.
int specialize_unit(BcUnit& unit);

// Expands eligible hinted calls (direct, non-recursive, !inline callee) into
// the caller, up to `limit` sites program-wide. Returns sites expanded;
// per_unit, when given, is resized to the unit count and gets per-caller
// totals.
int inline_calls(Program& prog, int limit, std::vector<int>* per_unit = nullptr);

// Full pipeline in order: inline, combine, specialize. No-op on stack-form
// programs. Validates the result.
OptReport optimize(Program& prog, const OptFlags& flags);

} // namespace dinolite
