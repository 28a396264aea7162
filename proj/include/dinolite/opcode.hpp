#pragma once

#include <cstddef>
#include <cstdint>

namespace dinolite {

// Field presence bits. A dumped instruction prints its present fields in the
// fixed order op1 op2 op3 imm cidx res pc n.
enum OpField : uint16_t {
    kFOp1 = 1 << 0,
    kFOp2 = 1 << 1,
    kFOp3 = 1 << 2,
    kFImmInt = 1 << 3,
    kFImmFloat = 1 << 4, // ldf; prints under the imm= key
    kFCidx = 1 << 5,
    kFRes = 1 << 6,
    kFPc = 1 << 7,
    kFN = 1 << 8,
};

// Dataflow role of each slot-ref field.
enum OpRole : uint8_t {
    kRoleNone = 0,
    kRoleRead = 1,
    kRoleWrite = 2,
    kRoleReadWrite = 3,
};

// Extra implicit slot reads beyond the named fields.
enum class OpWindow : uint8_t {
    None,
    AfterDest,      // mkarr: reads op1+1 .. op1+n
    AfterDestPairs, // mktab: reads op1+1 .. op1+2n
    Args,           // call/builtin: reads op3 .. op3+n-1
};

enum class OpForm : uint8_t { Rtl, Stack };

// One X-macro row per opcode: enum name, dump name, form, dump fields, roles of
// op1/op2/op3/res, implicit window. Register-transfer opcodes first, then the
// stack form. Order within each comparison/branch family is meaningful: the
// specialization and inversion tables in opcode.cpp are written against it.
#define DINOLITE_OPCODES(X)                                                                        \
    /* generic arithmetic, d = op2 ? op3 */                                                        \
    X(add, "add", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(sub, "sub", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(mul, "mul", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(div, "div", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(mod, "mod", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    /* integer-specialized arithmetic */                                                           \
    X(iadd, "iadd", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(isub, "isub", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(imul, "imul", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(idiv, "idiv", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(imod, "imod", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    /* float-specialized arithmetic */                                                             \
    X(fadd, "fadd", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(fsub, "fsub", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(fmul, "fmul", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(fdiv, "fdiv", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    /* add-immediate */                                                                            \
    X(addi, "addi", Rtl, kFOp1 | kFOp2 | kFImmInt, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, None)      \
    X(iaddi, "iaddi", Rtl, kFOp1 | kFOp2 | kFImmInt, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, None)     \
    /* unary */                                                                                    \
    X(neg, "neg", Rtl, kFOp1 | kFOp2, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, None)                  \
    X(not_, "not", Rtl, kFOp1 | kFOp2, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, None)                  \
    /* comparisons, d = op2 ? op3 as int 0/1 */                                                    \
    X(lt, "lt", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)           \
    X(le, "le", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)           \
    X(gt, "gt", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)           \
    X(ge, "ge", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)           \
    X(eq, "eq", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)           \
    X(ne, "ne", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)           \
    X(ilt, "ilt", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(ile, "ile", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(igt, "igt", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(ige, "ige", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(ieq, "ieq", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(ine, "ine", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(flt, "flt", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(fle, "fle", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(fgt, "fgt", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(fge, "fge", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(feq, "feq", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(fne, "fne", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)          \
    /* loads */                                                                                    \
    X(ld, "ld", Rtl, kFOp1 | kFOp2, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, None)                   \
    X(ldi, "ldi", Rtl, kFOp1 | kFImmInt, kRoleWrite, kRoleNone, kRoleNone, kRoleNone, None)               \
    X(ldf, "ldf", Rtl, kFOp1 | kFImmFloat, kRoleWrite, kRoleNone, kRoleNone, kRoleNone, None)             \
    X(lds, "lds", Rtl, kFOp1 | kFCidx, kRoleWrite, kRoleNone, kRoleNone, kRoleNone, None)                 \
    X(ldnil, "ldnil", Rtl, kFOp1, kRoleWrite, kRoleNone, kRoleNone, kRoleNone, None)                        \
    /* control flow */                                                                             \
    X(jmp, "jmp", Rtl, kFPc, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(bt, "bt", Rtl, kFOp1 | kFPc, kRoleRead, kRoleNone, kRoleNone, kRoleNone, None)                     \
    X(bf, "bf", Rtl, kFOp1 | kFPc, kRoleRead, kRoleNone, kRoleNone, kRoleNone, None)                     \
    /* fused compare-and-branch: res = op1 ? op2; branch when true */                              \
    X(btlt, "btlt", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None)  \
    X(btle, "btle", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None)  \
    X(btgt, "btgt", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None)  \
    X(btge, "btge", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None)  \
    X(bteq, "bteq", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None)  \
    X(btne, "btne", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None)  \
    X(ibtlt, "ibtlt", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(ibtle, "ibtle", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(ibtgt, "ibtgt", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(ibtge, "ibtge", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(ibteq, "ibteq", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(ibtne, "ibtne", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(fbtlt, "fbtlt", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(fbtle, "fbtle", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(fbtgt, "fbtgt", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(fbtge, "fbtge", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(fbteq, "fbteq", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    X(fbtne, "fbtne", Rtl, kFOp1 | kFOp2 | kFRes | kFPc, kRoleRead, kRoleRead, kRoleNone, kRoleWrite, None) \
    /* increment, compare and branch: op1 += imm; res = op1 < op2; branch when true */             \
    X(btltinc, "btltinc", Rtl, kFOp1 | kFOp2 | kFImmInt | kFRes | kFPc, kRoleReadWrite, kRoleRead,            \
      kRoleNone, kRoleWrite, None)                                                                 \
    X(ibtltinc, "ibtltinc", Rtl, kFOp1 | kFOp2 | kFImmInt | kFRes | kFPc, kRoleReadWrite, kRoleRead,           \
      kRoleNone, kRoleWrite, None)                                                                 \
    /* aggregates */                                                                               \
    X(mkarr, "mkarr", Rtl, kFOp1 | kFN, kRoleWrite, kRoleNone, kRoleNone, kRoleNone, AfterDest)             \
    X(mkfill, "mkfill", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)       \
    X(mktab, "mktab", Rtl, kFOp1 | kFN, kRoleWrite, kRoleNone, kRoleNone, kRoleNone, AfterDestPairs)        \
    X(aget, "aget", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleWrite, kRoleRead, kRoleRead, kRoleNone, None)         \
    X(aset, "aset", Rtl, kFOp1 | kFOp2 | kFOp3, kRoleRead, kRoleRead, kRoleRead, kRoleNone, None)          \
    X(alen, "alen", Rtl, kFOp1 | kFOp2, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, None)                 \
    /* calls: op2 holds the callee slot, op3 the first argument slot */                            \
    X(call, "call", Rtl, kFOp1 | kFOp2 | kFOp3 | kFN, kRoleWrite, kRoleRead, kRoleNone, kRoleNone, Args)   \
    X(ret, "ret", Rtl, kFOp1, kRoleRead, kRoleNone, kRoleNone, kRoleNone, None)                           \
    /* op2 is the builtin id, not a slot */                                                        \
    X(builtin, "builtin", Rtl, kFOp1 | kFOp2 | kFOp3 | kFN, kRoleWrite, kRoleNone, kRoleNone, kRoleNone,      \
      Args)                                                                                        \
    /* ---- stack form ---- */                                                                     \
    X(spushi, "spushi", Stack, kFImmInt, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                   \
    X(spushc, "spushc", Stack, kFCidx, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                     \
    X(spushnil, "spushnil", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                        \
    X(sload, "sload", Stack, kFImmInt, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                    \
    X(sstore, "sstore", Stack, kFImmInt, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                   \
    X(spop, "spop", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(sadd, "sadd", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(ssub, "ssub", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(smul, "smul", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(sdiv, "sdiv", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(smod, "smod", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(sneg, "sneg", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(snot, "snot", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(slt, "slt", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                             \
    X(sle, "sle", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                             \
    X(sgt, "sgt", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                             \
    X(sge, "sge", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                             \
    X(seq, "seq", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                             \
    X(sne, "sne", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                             \
    X(sjmp, "sjmp", Stack, kFPc, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                         \
    X(sbrt, "sbrt", Stack, kFPc, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                         \
    X(sbrf, "sbrf", Stack, kFPc, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                         \
    X(smkarr, "smkarr", Stack, kFN, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                        \
    X(smkfill, "smkfill", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                         \
    X(smktab, "smktab", Stack, kFN, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                        \
    X(saget, "saget", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                           \
    X(saset, "saset", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                           \
    X(salen, "salen", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                           \
    X(scall, "scall", Stack, kFN, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                         \
    X(sret, "sret", Stack, 0, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)                            \
    X(sbuiltin, "sbuiltin", Stack, kFImmInt, kRoleNone, kRoleNone, kRoleNone, kRoleNone, None)

enum class Op : uint8_t {
#define DINOLITE_OP_ENUM(name, str, form, fields, r1, r2, r3, rres, win) name,
    DINOLITE_OPCODES(DINOLITE_OP_ENUM)
#undef DINOLITE_OP_ENUM
};

constexpr int kOpCount = 0
#define DINOLITE_OP_COUNT(name, str, form, fields, r1, r2, r3, rres, win) +1
    DINOLITE_OPCODES(DINOLITE_OP_COUNT)
#undef DINOLITE_OP_COUNT
    ;

// Dense one-byte dispatch requires the whole opcode space to stay small.
static_assert(kOpCount < 256, "opcode space must fit dense one-byte dispatch");

struct OpInfo {
    const char* name;
    OpForm form;
    uint16_t fields;
    OpRole op1, op2, op3, res;
    OpWindow window;
};

const OpInfo& op_info(Op op);
const char* op_name(Op op);

// Returns the opcode for `name` restricted to the given form, or -1.
int op_by_name(const char* name, size_t len, OpForm form);

bool is_branch(Op op);     // has a pc field
bool is_fused_branch(Op op);
bool is_cmp(Op op);        // three-address comparison (any specialization)
bool writes_result(Op op); // any written slot field

// Specialization mappings. Return the input unchanged when no variant exists
// (mod has no float form, btltinc no float form, etc).
Op int_variant(Op op);
Op float_variant(Op op);

// Comparison negation within the same specialization level: lt <-> ge and so
// on. Only valid for is_cmp opcodes.
Op inverted_cmp(Op op);

// Fused branch built from a comparison: lt -> btlt, ilt -> ibtlt...
Op fused_branch_of_cmp(Op cmp);

// Opcodes that participate in the generic/specialized arithmetic counters:
// exactly those with an int or float variant, plus the variants themselves.
bool is_generic_arith(Op op);
bool is_specialized_arith(Op op);

} // namespace dinolite
