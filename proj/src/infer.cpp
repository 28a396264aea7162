#include "dinolite/infer.hpp"

#include "dinolite/dataflow.hpp"

namespace dinolite {

namespace {

// The resolver's builtin ids; returns the result mask per builtin.
TypeMask builtin_result(int32_t id) {
    switch (id) {
    case 0: // put
    case 1: // putln
        return kMaskNil;
    case 2: // int
        return kMaskInt;
    case 3: // float
        return kMaskFloat;
    case 4: // str
    case 6: // type
        return kMaskStr;
    case 5: // len
        return kMaskInt;
    default:
        return kMaskAny;
    }
}

// Result tag set of a binary arithmetic op given operand tag sets. Operand
// combinations that raise at runtime contribute nothing: the instruction
// never completes for them.
TypeMask arith_result(Op op, TypeMask a, TypeMask b) {
    TypeMask r = 0;
    bool int_pair = (a & kMaskInt) && (b & kMaskInt);
    bool float_pair =
        ((a & kMaskFloat) && (b & kMaskNum)) || ((b & kMaskFloat) && (a & kMaskNum));
    switch (op) {
    case Op::add:
        if (int_pair) r |= kMaskInt;
        if (float_pair) r |= kMaskFloat;
        if ((a & kMaskStr) && (b & kMaskStr)) r |= kMaskStr;
        break;
    case Op::sub:
    case Op::mul:
    case Op::div:
        if (int_pair) r |= kMaskInt;
        if (float_pair) r |= kMaskFloat;
        break;
    case Op::mod:
        if (int_pair) r |= kMaskInt;
        break;
    default:
        r = kMaskAny;
        break;
    }
    return r;
}

struct Analysis {
    const BcUnit& unit;

    TypeMask read(const std::vector<TypeMask>& state, int32_t ref) const {
        if (ref < 0) return kMaskAny; // globals are shared mutable state
        return state[static_cast<size_t>(ref)];
    }

    void write(std::vector<TypeMask>& state, int32_t ref, TypeMask m) const {
        if (ref >= 0) state[static_cast<size_t>(ref)] = m;
    }

    // Applies one instruction. When `record` is set, stores the operand masks
    // seen at this point (the fixed-point state).
    void step(const RtlInstr& in, std::vector<TypeMask>& state,
              std::vector<TypeMask>* record) const {
        if (record) {
            record->clear();
            for_each_input(in, [&](int32_t ref) { record->push_back(read(state, ref)); });
        }
        switch (in.op) {
        case Op::add:
        case Op::sub:
        case Op::mul:
        case Op::div:
        case Op::mod:
            write(state, in.op1, arith_result(in.op, read(state, in.op2), read(state, in.op3)));
            break;
        case Op::iadd:
        case Op::isub:
        case Op::imul:
        case Op::idiv:
        case Op::imod:
        case Op::iaddi:
            write(state, in.op1, kMaskInt);
            break;
        case Op::fadd:
        case Op::fsub:
        case Op::fmul:
        case Op::fdiv:
            write(state, in.op1, kMaskFloat);
            break;
        case Op::addi:
            write(state, in.op1, read(state, in.op2) & kMaskNum);
            break;
        case Op::neg:
            write(state, in.op1, read(state, in.op2) & kMaskNum);
            break;
        case Op::not_:
        case Op::lt:
        case Op::le:
        case Op::gt:
        case Op::ge:
        case Op::eq:
        case Op::ne:
        case Op::ilt:
        case Op::ile:
        case Op::igt:
        case Op::ige:
        case Op::ieq:
        case Op::ine:
        case Op::flt:
        case Op::fle:
        case Op::fgt:
        case Op::fge:
        case Op::feq:
        case Op::fne:
        case Op::alen:
            write(state, in.op1, kMaskInt);
            break;
        case Op::ld:
            write(state, in.op1, read(state, in.op2));
            break;
        case Op::ldi:
            write(state, in.op1, kMaskInt);
            break;
        case Op::ldf:
            write(state, in.op1, kMaskFloat);
            break;
        case Op::lds:
            write(state, in.op1, kMaskStr);
            break;
        case Op::ldnil:
            write(state, in.op1, kMaskNil);
            break;
        case Op::jmp:
        case Op::bt:
        case Op::bf:
        case Op::aset:
        case Op::ret:
            break;
        case Op::btlt:
        case Op::btle:
        case Op::btgt:
        case Op::btge:
        case Op::bteq:
        case Op::btne:
        case Op::ibtlt:
        case Op::ibtle:
        case Op::ibtgt:
        case Op::ibtge:
        case Op::ibteq:
        case Op::ibtne:
        case Op::fbtlt:
        case Op::fbtle:
        case Op::fbtgt:
        case Op::fbtge:
        case Op::fbteq:
        case Op::fbtne:
            write(state, in.res, kMaskInt);
            break;
        case Op::btltinc:
            write(state, in.op1, read(state, in.op1) & kMaskNum);
            write(state, in.res, kMaskInt);
            break;
        case Op::ibtltinc:
            write(state, in.op1, kMaskInt);
            write(state, in.res, kMaskInt);
            break;
        case Op::mkarr:
        case Op::mkfill:
            write(state, in.op1, kMaskArr);
            break;
        case Op::mktab:
            write(state, in.op1, kMaskTab);
            break;
        case Op::aget:
        case Op::call:
            write(state, in.op1, kMaskAny);
            break;
        case Op::builtin:
            write(state, in.op1, builtin_result(in.op2));
            break;
        default: // stack opcodes never appear in register-transfer units
            break;
        }
    }
};

} // namespace

InferResult infer_types(const BcUnit& unit, const Cfg& cfg) {
    size_t nslots = static_cast<size_t>(unit.nslots);
    Analysis an{unit};

    // Entry: parameters unknown, every other slot starts nil (frames are
    // nil-initialized). Unvisited blocks sit at bottom.
    std::vector<std::vector<TypeMask>> in(cfg.blocks.size(),
                                          std::vector<TypeMask>(nslots, 0));
    for (size_t s = 0; s < nslots; s++) {
        in[0][s] = static_cast<int>(s) < unit.arity ? kMaskAny : kMaskNil;
    }

    auto transfer = [&](int b, std::vector<TypeMask>& state) {
        const CfgBlock& blk = cfg.blocks[static_cast<size_t>(b)];
        for (int i = blk.first; i <= blk.last; i++) {
            an.step(unit.rtl[static_cast<size_t>(i)], state, nullptr);
        }
    };
    auto join = [&](std::vector<TypeMask>& dst, const std::vector<TypeMask>& src) {
        bool changed = false;
        for (size_t i = 0; i < dst.size(); i++) {
            TypeMask merged = static_cast<TypeMask>(dst[i] | src[i]);
            if (merged != dst[i]) {
                dst[i] = merged;
                changed = true;
            }
        }
        return changed;
    };
    solve_forward(cfg, in, transfer, join);

    InferResult result;
    result.inputs.resize(unit.rtl.size());
    for (size_t b = 0; b < cfg.blocks.size(); b++) {
        std::vector<TypeMask> state = in[b];
        const CfgBlock& blk = cfg.blocks[b];
        for (int i = blk.first; i <= blk.last; i++) {
            an.step(unit.rtl[static_cast<size_t>(i)], state,
                    &result.inputs[static_cast<size_t>(i)]);
        }
    }
    return result;
}

} // namespace dinolite
