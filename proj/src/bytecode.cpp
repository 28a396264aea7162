#include "dinolite/bytecode.hpp"

#include "dinolite/diag.hpp"

namespace dinolite {

int BcUnit::add_pool_str(const std::string& s) {
    for (size_t i = 0; i < pool.size(); i++) {
        if (pool[i].kind == PoolConst::Kind::Str && pool[i].s == s) {
            return int(i);
        }
    }
    PoolConst c;
    c.kind = PoolConst::Kind::Str;
    c.s = s;
    pool.push_back(std::move(c));
    return int(pool.size()) - 1;
}

int BcUnit::add_pool_float(double f) {
    for (size_t i = 0; i < pool.size(); i++) {
        if (pool[i].kind == PoolConst::Kind::Float && pool[i].f == f) {
            return int(i);
        }
    }
    PoolConst c;
    c.kind = PoolConst::Kind::Float;
    c.f = f;
    pool.push_back(c);
    return int(pool.size()) - 1;
}

namespace {

[[noreturn]] void bad(const BcUnit& u, size_t idx, const std::string& msg) {
    throw CompileError("bytecode", {},
                       "function '" + u.name + "' instruction " + std::to_string(idx) + ": " + msg);
}

void check_slot(const Program& prog, const BcUnit& u, size_t idx, int32_t ref) {
    if (slot_is_global(ref)) {
        if (global_index(ref) >= int(prog.globals.size())) {
            bad(u, idx, "global slot out of range");
        }
    } else if (ref >= u.nslots) {
        bad(u, idx, "frame slot out of range");
    }
}

void validate_rtl_unit(const Program& prog, const BcUnit& u) {
    if (u.rtl.empty()) {
        throw CompileError("bytecode", {}, "function '" + u.name + "' has no code");
    }
    for (size_t i = 0; i < u.rtl.size(); i++) {
        const RtlInstr& in = u.rtl[i];
        const OpInfo& info = op_info(in.op);
        if (info.form != OpForm::Rtl) {
            bad(u, i, "stack opcode in a register-transfer unit");
        }
        for_each_input(in, [&](int32_t ref) { check_slot(prog, u, i, ref); });
        for_each_output(in, [&](int32_t ref) { check_slot(prog, u, i, ref); });
        if (info.fields & kFPc) {
            if (in.pc < 0 || size_t(in.pc) >= u.rtl.size()) {
                bad(u, i, "branch target out of range");
            }
        }
        if (info.fields & kFCidx) {
            if (in.cidx < 0 || size_t(in.cidx) >= u.pool.size() ||
                u.pool[in.cidx].kind != PoolConst::Kind::Str) {
                bad(u, i, "bad string pool index");
            }
        }
        if (info.fields & kFN) {
            if (in.n < 0) {
                bad(u, i, "negative count");
            }
        }
        if (in.op == Op::call) {
            if (in.op3 < 0) {
                bad(u, i, "argument window must use frame slots");
            }
        }
        if (in.op == Op::builtin) {
            if (in.op2 < 0 || in.op2 >= 7) {
                bad(u, i, "unknown builtin id");
            }
        }
    }
    // The epilogue guarantees every path ends at a ret, so conditional
    // fall-through can never run off the end.
    if (u.rtl.back().op != Op::ret) {
        bad(u, u.rtl.size() - 1, "unit must end with ret");
    }
}

void validate_stack_unit(const Program& prog, const BcUnit& u) {
    if (u.stack.empty()) {
        throw CompileError("bytecode", {}, "function '" + u.name + "' has no code");
    }
    for (size_t i = 0; i < u.stack.size(); i++) {
        const StackInstr& in = u.stack[i];
        const OpInfo& info = op_info(in.op);
        if (info.form != OpForm::Stack) {
            bad(u, i, "register-transfer opcode in a stack unit");
        }
        switch (in.op) {
        case Op::sload:
        case Op::sstore:
            check_slot(prog, u, i, int32_t(in.operand));
            break;
        case Op::sjmp:
        case Op::sbrt:
        case Op::sbrf:
            if (in.operand < 0 || size_t(in.operand) >= u.stack.size()) {
                bad(u, i, "branch target out of range");
            }
            break;
        case Op::spushc:
            if (in.cidx < 0 || size_t(in.cidx) >= u.pool.size()) {
                bad(u, i, "bad constant pool index");
            }
            break;
        case Op::sbuiltin:
            if (in.operand < 0 || in.operand >= 7) {
                bad(u, i, "unknown builtin id");
            }
            break;
        case Op::smkarr:
        case Op::smktab:
        case Op::scall:
            if (in.operand < 0) {
                bad(u, i, "negative count");
            }
            break;
        default:
            break;
        }
    }
    if (u.stack.back().op != Op::sret) {
        bad(u, u.stack.size() - 1, "unit must end with sret");
    }
}

} // namespace

void validate(const Program& prog) {
    if (prog.units.empty()) {
        throw CompileError("bytecode", {}, "program has no functions");
    }
    for (size_t i = 0; i < prog.units.size(); i++) {
        const BcUnit& u = prog.units[i];
        if (u.func_id != int(i)) {
            throw CompileError("bytecode", {}, "function ids must be dense and ordered");
        }
        if (u.arity < 0 || u.nslots < u.arity) {
            throw CompileError("bytecode", {}, "function '" + u.name + "' has a bad frame layout");
        }
        if (prog.is_rtl) {
            validate_rtl_unit(prog, u);
        } else {
            validate_stack_unit(prog, u);
        }
    }
    for (const GlobalDecl& g : prog.globals) {
        if (g.fn >= 0 && size_t(g.fn) >= prog.units.size()) {
            throw CompileError("bytecode", {}, "global '" + g.name + "' binds a missing function");
        }
    }
}

} // namespace dinolite
