#include "dinolite/cfg.hpp"

#include <algorithm>

namespace dinolite {

std::vector<bool> branch_targets(const std::vector<RtlInstr>& code) {
    std::vector<bool> target(code.size(), false);
    for (const RtlInstr& in : code) {
        if (is_branch(in.op)) target[static_cast<size_t>(in.pc)] = true;
    }
    return target;
}

Cfg Cfg::build(const BcUnit& unit) {
    const std::vector<RtlInstr>& code = unit.rtl;
    size_t n = code.size();

    std::vector<bool> leader(n, false);
    if (n > 0) leader[0] = true;
    for (size_t i = 0; i < n; i++) {
        const RtlInstr& in = code[i];
        if (is_branch(in.op)) {
            leader[static_cast<size_t>(in.pc)] = true;
            if (i + 1 < n) leader[i + 1] = true;
        } else if (in.op == Op::ret && i + 1 < n) {
            leader[i + 1] = true;
        }
    }

    Cfg cfg;
    cfg.block_of.assign(n, 0);
    for (size_t i = 0; i < n; i++) {
        if (leader[i]) {
            CfgBlock b;
            b.first = static_cast<int>(i);
            cfg.blocks.push_back(b);
        }
        cfg.block_of[i] = static_cast<int>(cfg.blocks.size()) - 1;
        cfg.blocks.back().last = static_cast<int>(i);
    }

    for (size_t bi = 0; bi < cfg.blocks.size(); bi++) {
        CfgBlock& b = cfg.blocks[bi];
        const RtlInstr& end = code[static_cast<size_t>(b.last)];
        auto link = [&](int instr_idx) {
            int succ = cfg.block_of[static_cast<size_t>(instr_idx)];
            b.succs.push_back(succ);
            cfg.blocks[static_cast<size_t>(succ)].preds.push_back(static_cast<int>(bi));
        };
        if (end.op == Op::ret) continue;
        if (is_branch(end.op)) {
            link(end.pc);
            // jmp is the only unconditional branch; everything else falls
            // through as well.
            if (end.op != Op::jmp && b.last + 1 < static_cast<int>(n)) link(b.last + 1);
        } else if (b.last + 1 < static_cast<int>(n)) {
            link(b.last + 1);
        }
    }
    return cfg;
}

} // namespace dinolite
