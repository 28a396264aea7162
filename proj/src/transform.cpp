#include <vector>

#include "dinolite/cfg.hpp"
#include "dinolite/infer.hpp"
#include "dinolite/optimizer.hpp"

namespace dinolite {

namespace {

// Removes instructions marked dead and remaps every branch target. Dead
// instructions must not be branch targets.
void compact(std::vector<RtlInstr>& code, const std::vector<bool>& dead) {
    std::vector<int32_t> remap(code.size());
    int32_t next = 0;
    for (size_t i = 0; i < code.size(); i++) {
        remap[i] = next;
        if (!dead[i]) next++;
    }
    std::vector<RtlInstr> out;
    out.reserve(static_cast<size_t>(next));
    for (size_t i = 0; i < code.size(); i++) {
        if (dead[i]) continue;
        RtlInstr in = code[i];
        if (is_branch(in.op)) in.pc = remap[static_cast<size_t>(in.pc)];
        out.push_back(in);
    }
    code.swap(out);
}

// The compare result feeding a branch-if-false gets stored inverted, so the
// slot must be dead afterwards. The compiler only emits this shape with a
// single-use temporary; for foreign bytecode we check the rest of the block
// and require an unnamed slot when the value could outlive it.
bool result_dead_after(const BcUnit& unit, size_t branch_idx, int32_t slot) {
    for (size_t j = branch_idx + 1; j < unit.rtl.size(); j++) {
        const RtlInstr& in = unit.rtl[j];
        bool reads = false, writes = false;
        for_each_input(in, [&](int32_t r) { reads |= r == slot; });
        for_each_output(in, [&](int32_t r) { writes |= r == slot; });
        if (reads) return false;
        if (writes) return true;
        if (is_branch(in.op) || in.op == Op::ret) break; // end of block
    }
    return slot >= static_cast<int32_t>(unit.vdecls.size());
}

int fuse_cmp_branch(BcUnit& unit) {
    std::vector<RtlInstr>& code = unit.rtl;
    std::vector<bool> target = branch_targets(code);
    std::vector<bool> dead(code.size(), false);
    int fused = 0;

    for (size_t i = 0; i + 1 < code.size(); i++) {
        if (dead[i]) continue;
        RtlInstr& cmp = code[i];
        const RtlInstr& br = code[i + 1];
        if (!is_cmp(cmp.op)) continue;
        if (br.op != Op::bt && br.op != Op::bf) continue;
        if (br.op1 != cmp.op1) continue;
        if (target[i + 1]) continue; // someone jumps straight at the branch
        if (br.op == Op::bf && !result_dead_after(unit, i + 1, cmp.op1)) continue;

        Op fop = fused_branch_of_cmp(br.op == Op::bf ? inverted_cmp(cmp.op) : cmp.op);
        RtlInstr f;
        f.op = fop;
        f.op1 = cmp.op2;
        f.op2 = cmp.op3;
        f.res = cmp.op1;
        f.pc = br.pc;
        code[i] = f;
        dead[i + 1] = true;
        fused++;
        i++; // the dead slot cannot start another pair
    }
    if (fused > 0) compact(code, dead);
    return fused;
}

int fuse_inc_branch(BcUnit& unit) {
    std::vector<RtlInstr>& code = unit.rtl;
    std::vector<bool> target = branch_targets(code);
    std::vector<bool> dead(code.size(), false);
    int fused = 0;

    for (size_t i = 0; i + 1 < code.size(); i++) {
        if (dead[i]) continue;
        RtlInstr& step = code[i];
        const RtlInstr& br = code[i + 1];
        bool generic = step.op == Op::addi && br.op == Op::btlt;
        bool typed = step.op == Op::iaddi && br.op == Op::ibtlt;
        if (!generic && !typed) continue;
        if (step.op1 != step.op2) continue;                 // must be an in-place step
        if (br.op1 != step.op1) continue;                   // loop variable on the left
        if (br.pc != static_cast<int32_t>(i)) continue;     // branch back to the step
        if (target[i + 1]) continue;

        RtlInstr f;
        f.op = generic ? Op::btltinc : Op::ibtltinc;
        f.op1 = step.op1;
        f.op2 = br.op2;
        f.imm = step.imm;
        f.res = br.res;
        f.pc = static_cast<int32_t>(i); // the fused instruction loops on itself
        code[i] = f;
        dead[i + 1] = true;
        fused++;
        i++;
    }
    if (fused > 0) compact(code, dead);
    return fused;
}

} // namespace

CombineStats combine_unit(BcUnit& unit) {
    CombineStats stats;
    stats.cmp_branch = fuse_cmp_branch(unit);
    stats.inc_branch = fuse_inc_branch(unit);
    return stats;
}

int specialize_unit(BcUnit& unit) {
    if (unit.rtl.empty()) return 0;
    Cfg cfg = Cfg::build(unit);
    InferResult types = infer_types(unit, cfg);
    int changed = 0;

    for (size_t i = 0; i < unit.rtl.size(); i++) {
        RtlInstr& in = unit.rtl[i];
        const std::vector<TypeMask>& masks = types.inputs[i];
        Op want = in.op;
        switch (in.op) {
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div:
        case Op::mod:
        case Op::lt:
        case Op::le:
        case Op::gt:
        case Op::ge:
        case Op::eq:
        case Op::ne:
        case Op::btlt:
        case Op::btle:
        case Op::btgt:
        case Op::btge:
        case Op::bteq:
        case Op::btne:
        case Op::btltinc:
            if (masks[0] == kMaskInt && masks[1] == kMaskInt) {
                want = int_variant(in.op);
            } else if (masks[0] == kMaskFloat && masks[1] == kMaskFloat) {
                want = float_variant(in.op);
            }
            break;
        case Op::addi:
            if (masks[0] == kMaskInt) want = int_variant(in.op);
            break;
        default:
            break;
        }
        if (want != in.op) {
            in.op = want;
            changed++;
        }
    }
    return changed;
}

} // namespace dinolite
