#include "dinolite/opcode.hpp"

#include <array>
#include <cstring>

namespace dinolite {

namespace {

constexpr std::array<OpInfo, kOpCount> kOps = {{
#define DINOLITE_OP_INFO(name, str, form, fields, r1, r2, r3, rres, win)                           \
    OpInfo{str, OpForm::form, uint16_t(fields), r1, r2, r3, rres, OpWindow::win},
    DINOLITE_OPCODES(DINOLITE_OP_INFO)
#undef DINOLITE_OP_INFO
}};

} // namespace

const OpInfo& op_info(Op op) {
    return kOps[size_t(op)];
}

const char* op_name(Op op) {
    return kOps[size_t(op)].name;
}

int op_by_name(const char* name, size_t len, OpForm form) {
    for (int i = 0; i < kOpCount; i++) {
        if (kOps[i].form == form && std::strlen(kOps[i].name) == len &&
            std::memcmp(kOps[i].name, name, len) == 0) {
            return i;
        }
    }
    return -1;
}

bool is_branch(Op op) {
    return (op_info(op).fields & kFPc) != 0;
}

bool is_fused_branch(Op op) {
    switch (op) {
    case Op::btlt: case Op::btle: case Op::btgt: case Op::btge: case Op::bteq: case Op::btne:
    case Op::ibtlt: case Op::ibtle: case Op::ibtgt: case Op::ibtge: case Op::ibteq: case Op::ibtne:
    case Op::fbtlt: case Op::fbtle: case Op::fbtgt: case Op::fbtge: case Op::fbteq: case Op::fbtne:
    case Op::btltinc: case Op::ibtltinc:
        return true;
    default:
        return false;
    }
}

bool is_cmp(Op op) {
    switch (op) {
    case Op::lt: case Op::le: case Op::gt: case Op::ge: case Op::eq: case Op::ne:
    case Op::ilt: case Op::ile: case Op::igt: case Op::ige: case Op::ieq: case Op::ine:
    case Op::flt: case Op::fle: case Op::fgt: case Op::fge: case Op::feq: case Op::fne:
        return true;
    default:
        return false;
    }
}

bool writes_result(Op op) {
    const OpInfo& info = op_info(op);
    return (info.op1 & kRoleWrite) || (info.res & kRoleWrite);
}

Op int_variant(Op op) {
    switch (op) {
    case Op::add: return Op::iadd;
    case Op::sub: return Op::isub;
    case Op::mul: return Op::imul;
    case Op::div: return Op::idiv;
    case Op::mod: return Op::imod;
    case Op::addi: return Op::iaddi;
    case Op::lt: return Op::ilt;
    case Op::le: return Op::ile;
    case Op::gt: return Op::igt;
    case Op::ge: return Op::ige;
    case Op::eq: return Op::ieq;
    case Op::ne: return Op::ine;
    case Op::btlt: return Op::ibtlt;
    case Op::btle: return Op::ibtle;
    case Op::btgt: return Op::ibtgt;
    case Op::btge: return Op::ibtge;
    case Op::bteq: return Op::ibteq;
    case Op::btne: return Op::ibtne;
    case Op::btltinc: return Op::ibtltinc;
    default: return op;
    }
}

Op float_variant(Op op) {
    switch (op) {
    case Op::add: return Op::fadd;
    case Op::sub: return Op::fsub;
    case Op::mul: return Op::fmul;
    case Op::div: return Op::fdiv;
    case Op::lt: return Op::flt;
    case Op::le: return Op::fle;
    case Op::gt: return Op::fgt;
    case Op::ge: return Op::fge;
    case Op::eq: return Op::feq;
    case Op::ne: return Op::fne;
    case Op::btlt: return Op::fbtlt;
    case Op::btle: return Op::fbtle;
    case Op::btgt: return Op::fbtgt;
    case Op::btge: return Op::fbtge;
    case Op::bteq: return Op::fbteq;
    case Op::btne: return Op::fbtne;
    default: return op;
    }
}

Op inverted_cmp(Op op) {
    switch (op) {
    case Op::lt: return Op::ge;
    case Op::le: return Op::gt;
    case Op::gt: return Op::le;
    case Op::ge: return Op::lt;
    case Op::eq: return Op::ne;
    case Op::ne: return Op::eq;
    case Op::ilt: return Op::ige;
    case Op::ile: return Op::igt;
    case Op::igt: return Op::ile;
    case Op::ige: return Op::ilt;
    case Op::ieq: return Op::ine;
    case Op::ine: return Op::ieq;
    case Op::flt: return Op::fge;
    case Op::fle: return Op::fgt;
    case Op::fgt: return Op::fle;
    case Op::fge: return Op::flt;
    case Op::feq: return Op::fne;
    case Op::fne: return Op::feq;
    default: return op;
    }
}

Op fused_branch_of_cmp(Op cmp) {
    switch (cmp) {
    case Op::lt: return Op::btlt;
    case Op::le: return Op::btle;
    case Op::gt: return Op::btgt;
    case Op::ge: return Op::btge;
    case Op::eq: return Op::bteq;
    case Op::ne: return Op::btne;
    case Op::ilt: return Op::ibtlt;
    case Op::ile: return Op::ibtle;
    case Op::igt: return Op::ibtgt;
    case Op::ige: return Op::ibtge;
    case Op::ieq: return Op::ibteq;
    case Op::ine: return Op::ibtne;
    case Op::flt: return Op::fbtlt;
    case Op::fle: return Op::fbtle;
    case Op::fgt: return Op::fbtgt;
    case Op::fge: return Op::fbtge;
    case Op::feq: return Op::fbteq;
    case Op::fne: return Op::fbtne;
    default: return cmp;
    }
}

bool is_generic_arith(Op op) {
    switch (op) {
    case Op::add: case Op::sub: case Op::mul: case Op::div: case Op::mod:
    case Op::addi:
    case Op::lt: case Op::le: case Op::gt: case Op::ge: case Op::eq: case Op::ne:
    case Op::btlt: case Op::btle: case Op::btgt: case Op::btge: case Op::bteq: case Op::btne:
    case Op::btltinc:
        return true;
    default:
        return false;
    }
}

bool is_specialized_arith(Op op) {
    switch (op) {
    case Op::iadd: case Op::isub: case Op::imul: case Op::idiv: case Op::imod:
    case Op::fadd: case Op::fsub: case Op::fmul: case Op::fdiv:
    case Op::iaddi:
    case Op::ilt: case Op::ile: case Op::igt: case Op::ige: case Op::ieq: case Op::ine:
    case Op::flt: case Op::fle: case Op::fgt: case Op::fge: case Op::feq: case Op::fne:
    case Op::ibtlt: case Op::ibtle: case Op::ibtgt: case Op::ibtge: case Op::ibteq: case Op::ibtne:
    case Op::fbtlt: case Op::fbtle: case Op::fbtgt: case Op::fbtge: case Op::fbteq: case Op::fbtne:
    case Op::ibtltinc:
        return true;
    default:
        return false;
    }
}

} // namespace dinolite
