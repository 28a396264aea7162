#include <vector>

#include "dinolite/ast.hpp"
#include "dinolite/cfg.hpp"
#include "dinolite/dataflow.hpp"
#include "dinolite/optimizer.hpp"

namespace dinolite {

namespace {

// Direct call of a statically bound function: the callee operand is a global
// slot preloaded with a function value.
int direct_callee(const Program& prog, const RtlInstr& in) {
    if (in.op != Op::call) return -1;
    if (!slot_is_global(in.op2)) return -1;
    int g = global_index(in.op2);
    if (g < 0 || g >= static_cast<int>(prog.globals.size())) return -1;
    return prog.globals[static_cast<size_t>(g)].fn;
}

bool calls_itself(const Program& prog, const BcUnit& unit) {
    for (const RtlInstr& in : unit.rtl) {
        if (direct_callee(prog, in) == unit.func_id) return true;
    }
    return false;
}

// Splices the callee body over the call site. Callee slot s lives at
// caller slot slot_base + s; the caller frame grows accordingly.
void splice(BcUnit& caller, size_t call_idx, const BcUnit& callee,
            const std::vector<bool>& needs_init) {
    const RtlInstr call = caller.rtl[call_idx];
    int32_t slot_base = caller.nslots;
    caller.nslots += callee.nslots;

    auto remap_slot = [&](int32_t ref) -> int32_t {
        return ref >= 0 ? ref + slot_base : ref;
    };

    // Instruction layout of the replacement: parameter moves, fresh-slot
    // clears, then the body with each ret expanded to a result move plus a
    // jump past the splice.
    std::vector<RtlInstr> repl;
    for (int p = 0; p < callee.arity; p++) {
        RtlInstr ld;
        ld.op = Op::ld;
        ld.op1 = slot_base + p;
        ld.op2 = call.op3 + p;
        repl.push_back(ld);
    }
    for (int s = callee.arity; s < callee.nslots; s++) {
        if (!needs_init[static_cast<size_t>(s)]) continue;
        RtlInstr nil;
        nil.op = Op::ldnil;
        nil.op1 = slot_base + s;
        repl.push_back(nil);
    }

    int32_t body_start = static_cast<int32_t>(repl.size());
    std::vector<int32_t> body_pos(callee.rtl.size());
    int32_t off = body_start;
    for (size_t j = 0; j < callee.rtl.size(); j++) {
        body_pos[j] = off;
        off += callee.rtl[j].op == Op::ret ? 2 : 1;
    }
    int32_t repl_len = off;
    int32_t after = static_cast<int32_t>(call_idx) + repl_len;

    // Callee constants move into the caller pool (deduplicated).
    std::vector<int32_t> pool_map(callee.pool.size());
    for (size_t c = 0; c < callee.pool.size(); c++) {
        const PoolConst& pc = callee.pool[c];
        pool_map[c] = pc.kind == PoolConst::Kind::Float ? caller.add_pool_float(pc.f)
                                                        : caller.add_pool_str(pc.s);
    }

    for (size_t j = 0; j < callee.rtl.size(); j++) {
        RtlInstr in = callee.rtl[j];
        if (in.op == Op::ret) {
            RtlInstr mv;
            mv.op = Op::ld;
            mv.op1 = call.op1;
            mv.op2 = remap_slot(in.op1);
            repl.push_back(mv);
            RtlInstr jm;
            jm.op = Op::jmp;
            jm.pc = after;
            repl.push_back(jm);
            continue;
        }
        in.op1 = remap_slot(in.op1);
        if (in.op != Op::builtin) in.op2 = remap_slot(in.op2); // builtin op2 is an id
        in.op3 = remap_slot(in.op3);
        in.res = remap_slot(in.res);
        if (in.cidx >= 0) in.cidx = pool_map[static_cast<size_t>(in.cidx)];
        if (is_branch(in.op)) {
            in.pc = static_cast<int32_t>(call_idx) + body_pos[static_cast<size_t>(in.pc)];
        }
        repl.push_back(in);
    }

    // Rebuild the caller code with the call replaced and branch targets past
    // the splice shifted.
    int32_t shift = repl_len - 1;
    std::vector<RtlInstr> out;
    out.reserve(caller.rtl.size() + static_cast<size_t>(shift));
    for (size_t i = 0; i < caller.rtl.size(); i++) {
        if (i == call_idx) {
            out.insert(out.end(), repl.begin(), repl.end());
            continue;
        }
        RtlInstr in = caller.rtl[i];
        if (is_branch(in.op) && in.pc > static_cast<int32_t>(call_idx)) in.pc += shift;
        out.push_back(in);
    }
    caller.rtl.swap(out);
}

} // namespace

int inline_calls(Program& prog, int limit, std::vector<int>* per_unit) {
    int done = 0;
    if (per_unit) per_unit->assign(prog.units.size(), 0);
    for (size_t u = 0; u < prog.units.size(); u++) {
        BcUnit& caller = prog.units[u];
        bool again = true;
        while (again && done < limit) {
            again = false;
            for (size_t i = 0; i < caller.rtl.size(); i++) {
                int fid = direct_callee(prog, caller.rtl[i]);
                if (fid < 0 || fid == caller.func_id) continue;
                const BcUnit& callee = prog.units[static_cast<size_t>(fid)];
                if ((callee.hints & kHintInline) == 0) continue;
                if (caller.rtl[i].n != callee.arity) continue; // leave the arity error to the VM
                if (calls_itself(prog, callee)) continue;

                Cfg cfg = Cfg::build(callee);
                splice(caller, i, callee, read_before_write_slots(callee, cfg));
                done++;
                if (per_unit) (*per_unit)[u]++;
                again = done < limit;
                break;
            }
        }
    }
    return done;
}

} // namespace dinolite
