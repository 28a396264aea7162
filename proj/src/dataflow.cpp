#include "dinolite/dataflow.hpp"

namespace dinolite {

namespace {

// State: the set of slots definitely written on every path to this point.
using Written = std::vector<bool>;

void apply_instr(const BcUnit& unit, const RtlInstr& in, Written& w,
                 std::vector<bool>* flagged) {
    for_each_input(in, [&](int32_t ref) {
        if (flagged && ref >= 0 && ref < unit.nslots && !w[static_cast<size_t>(ref)]) {
            (*flagged)[static_cast<size_t>(ref)] = true;
        }
    });
    for_each_output(in, [&](int32_t ref) {
        if (ref >= 0 && ref < unit.nslots) w[static_cast<size_t>(ref)] = true;
    });
}

} // namespace

std::vector<bool> read_before_write_slots(const BcUnit& unit, const Cfg& cfg) {
    size_t nslots = static_cast<size_t>(unit.nslots);
    Written entry(nslots, false);
    for (int p = 0; p < unit.arity; p++) entry[static_cast<size_t>(p)] = true;

    // Bottom is the full set: unvisited blocks constrain nothing under the
    // intersection join.
    std::vector<Written> in(cfg.blocks.size(), Written(nslots, true));
    in[0] = entry;

    auto transfer = [&](int b, Written& w) {
        const CfgBlock& blk = cfg.blocks[static_cast<size_t>(b)];
        for (int i = blk.first; i <= blk.last; i++) {
            apply_instr(unit, unit.rtl[static_cast<size_t>(i)], w, nullptr);
        }
    };
    auto join = [&](Written& dst, const Written& src) {
        bool changed = false;
        for (size_t i = 0; i < dst.size(); i++) {
            if (dst[i] && !src[i]) {
                dst[i] = false;
                changed = true;
            }
        }
        return changed;
    };
    solve_forward(cfg, in, transfer, join);

    std::vector<bool> flagged(nslots, false);
    for (size_t b = 0; b < cfg.blocks.size(); b++) {
        Written w = in[b];
        const CfgBlock& blk = cfg.blocks[b];
        for (int i = blk.first; i <= blk.last; i++) {
            apply_instr(unit, unit.rtl[static_cast<size_t>(i)], w, &flagged);
        }
    }
    for (int p = 0; p < unit.arity; p++) flagged[static_cast<size_t>(p)] = false;
    return flagged;
}

} // namespace dinolite
