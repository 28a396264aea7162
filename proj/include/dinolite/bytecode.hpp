#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dinolite/opcode.hpp"

namespace dinolite {

// Slot references are signed: value >= 0 names a frame slot of the current
// function, value < 0 names global slot (-ref - 1).
constexpr int32_t slot_local(int i) { return i; }
constexpr int32_t slot_global(int g) { return -g - 1; }
constexpr bool slot_is_global(int32_t ref) { return ref < 0; }
constexpr int global_index(int32_t ref) { return -ref - 1; }

struct RtlInstr {
    Op op = Op::ldnil;
    int32_t op1 = 0;
    int32_t op2 = 0;
    int32_t op3 = 0;
    int64_t imm = 0;   // integer immediate (addi, ldi, btltinc step)
    double fimm = 0.0; // float immediate (ldf)
    int32_t cidx = -1; // constant pool index (lds)
    int32_t res = 0;   // extra result slot of fused branches
    int32_t pc = -1;   // absolute branch target
    int32_t n = 0;     // arity / element count
};

struct StackInstr {
    Op op = Op::spushnil;
    int64_t operand = 0; // immediate, slot ref, pc, count or builtin id
    int32_t cidx = -1;   // constant pool index (spushc)
};

struct PoolConst {
    enum class Kind : uint8_t { Float, Str } kind = Kind::Str;
    double f = 0.0;
    std::string s;

    bool operator==(const PoolConst& o) const {
        return kind == o.kind && (kind == Kind::Float ? f == o.f : s == o.s);
    }
};

struct VDecl {
    std::string name;
    int32_t slot = 0;
};

// One compiled function. Exactly one of `rtl` / `stack` is populated,
// matching the owning Program's form.
struct BcUnit {
    int func_id = 0;
    std::string name;
    int arity = 0;
    int nslots = 0; // frame size: params, named locals, then temps
    uint8_t hints = 0;
    int src_line = 0; // 0 when unknown (e.g. loaded from a text dump)
    bool declares_nested = false;

    std::vector<RtlInstr> rtl;
    std::vector<StackInstr> stack;
    std::vector<PoolConst> pool;
    std::vector<VDecl> vdecls; // debug names for params and named locals

    size_t code_size() const { return rtl.empty() ? stack.size() : rtl.size(); }

    int add_pool_str(const std::string& s);
    int add_pool_float(double f);
};

struct GlobalDecl {
    std::string name;
    int32_t slot = 0;
    int32_t fn = -1; // function id preloaded into this slot, or -1
};

struct Program {
    bool is_rtl = true;
    std::vector<BcUnit> units;       // units[i].func_id == i; unit 0 is the entry
    std::vector<GlobalDecl> globals; // slot i described by globals[i]; slot 0 is argv
    std::string source_name;
};

// Enumerates the slot refs an instruction reads, including implicit windows
// (constructor element lists and call argument ranges).
template <typename Fn> void for_each_input(const RtlInstr& in, Fn&& fn) {
    const OpInfo& info = op_info(in.op);
    if (info.op1 & kRoleRead) fn(in.op1);
    if (info.op2 & kRoleRead) fn(in.op2);
    if (info.op3 & kRoleRead) fn(in.op3);
    switch (info.window) {
    case OpWindow::None:
        break;
    case OpWindow::AfterDest:
        for (int32_t i = 1; i <= in.n; i++) fn(in.op1 + i);
        break;
    case OpWindow::AfterDestPairs:
        for (int32_t i = 1; i <= 2 * in.n; i++) fn(in.op1 + i);
        break;
    case OpWindow::Args:
        for (int32_t i = 0; i < in.n; i++) fn(in.op3 + i);
        break;
    }
}

// Enumerates the slot refs an instruction writes.
template <typename Fn> void for_each_output(const RtlInstr& in, Fn&& fn) {
    const OpInfo& info = op_info(in.op);
    if (info.op1 & kRoleWrite) fn(in.op1);
    if (info.res & kRoleWrite) fn(in.res);
}

// Structural well-formedness: branch targets in range, slot refs within the
// frame and global tables, pool indexes valid, units ending in ret, call
// windows inside the frame. Throws CompileError ("bytecode") on violation.
void validate(const Program& prog);

} // namespace dinolite
