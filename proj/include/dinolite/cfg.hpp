#pragma once

#include <vector>

#include "dinolite/bytecode.hpp"

namespace dinolite {

struct CfgBlock {
    int first = 0; // instruction index range [first, last]
    int last = 0;
    std::vector<int> succs;
    std::vector<int> preds;
};

// Basic blocks over one function's register-transfer code. Calls do not end
// blocks (analysis is per function); ret ends a block with no successors.
struct Cfg {
    std::vector<CfgBlock> blocks; // blocks[0] starts at instruction 0
    std::vector<int> block_of;    // instruction index -> block id

    static Cfg build(const BcUnit& unit);
};

// Marks every instruction that is the target of some branch.
std::vector<bool> branch_targets(const std::vector<RtlInstr>& code);

} // namespace dinolite
