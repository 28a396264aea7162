#include <chrono>
#include <memory>
#include <new>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dinolite/ast.hpp"
#include "dinolite/collections.hpp"
#include "dinolite/vm.hpp"
#include "vm_ops.hpp"

// Dispatch uses computed goto where available; the switch fallback keeps the
// same structure through the VM_* macros. Define DINOLITE_NO_CGOTO to force
// the fallback.
#if (defined(__GNUC__) || defined(__clang__)) && !defined(DINOLITE_NO_CGOTO)
#define DINOLITE_CGOTO 1
#endif

namespace dinolite {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// A suspended caller. The running function's state lives in exec() locals.
struct Frame {
    const BcUnit* unit;
    int32_t ret_pc;   // resume index in the caller's code
    size_t base;      // caller frame start in the slot arena
    int32_t ret_dest; // caller slot ref receiving the result
    bool has_memo_key;
    Value memo_key;
    double child_seconds;
    Clock::time_point enter;
};

class RtlVm {
  public:
    RtlVm(const Program& prog, const RunOptions& opts, std::ostream& out)
        : prog_(prog), opts_(opts), out_(out) {}

    ExitReport run() {
        globals_ = detail::prepare_globals(prog_, opts_.argv);
        pools_ = detail::materialize_pools(prog_);
        names_ = detail::collect_fun_names(prog_);

        size_t nunits = prog_.units.size();
        profile_.calls.assign(nunits, 0);
        profile_.self_seconds.assign(nunits, 0.0);
        profile_.timed = opts_.profile;
        memo_.resize(nunits);
        memo_stats_.assign(nunits, MemoFuncStats{});
        if (opts_.record_types) presize_type_record();

        ExitReport report;
        profile_.calls[0] = 1;
        Clock::time_point t0 = Clock::now();
        try {
            if (opts_.record_types) {
                exec<true, true>();
            } else if (opts_.count_ops) {
                exec<false, true>();
            } else {
                exec<false, false>();
            }
        } catch (const RuntimeError& e) {
            report.exit_code = kExitRuntime;
            report.error = e.what();
        } catch (const std::bad_alloc&) {
            report.exit_code = kExitRuntime;
            report.error = "runtime error: out of memory";
        }
        profile_.total_seconds = seconds_since(t0);

        report.counters = counters_;
        report.profile = std::move(profile_);
        for (size_t i = 0; i < nunits; i++) {
            memo_stats_[i].entries = memo_[i] ? memo_[i]->size() : 0;
        }
        report.memo = std::move(memo_stats_);
        report.types = std::move(types_);
        return report;
    }

  private:
    template <bool kRecord, bool kCount> void exec();

    void presize_type_record() {
        types_.input_tags.resize(prog_.units.size());
        for (size_t u = 0; u < prog_.units.size(); u++) {
            types_.input_tags[u].resize(prog_.units[u].rtl.size());
            for (size_t i = 0; i < prog_.units[u].rtl.size(); i++) {
                int inputs = 0;
                for_each_input(prog_.units[u].rtl[i], [&](int32_t) { inputs++; });
                types_.input_tags[u][i].assign(static_cast<size_t>(inputs), 0);
            }
        }
    }

    const Program& prog_;
    const RunOptions& opts_;
    std::ostream& out_;

    std::vector<Value> globals_;
    std::vector<Value> arena_;
    std::vector<Frame> frames_;
    std::vector<std::vector<Value>> pools_;
    FunNames names_;
    std::vector<std::unique_ptr<AssocTable>> memo_;
    std::vector<MemoFuncStats> memo_stats_;
    ExecCounters counters_;
    ProfileData profile_;
    TypeRecord types_;
};

// Memo keys are frozen argument tuples; only scalar and string arguments are
// cacheable, anything else bypasses the table for that call.
bool memoizable_args(const Value* args, int n) {
    for (int i = 0; i < n; i++) {
        Tag t = args[i].tag();
        if (t != Tag::Nil && t != Tag::Int && t != Tag::Float && t != Tag::Str) return false;
    }
    return true;
}

template <bool kRecord, bool kCount> void RtlVm::exec() {
    const BcUnit* unit = &prog_.units[0];
    const RtlInstr* code = unit->rtl.data();
    const RtlInstr* ip = code;
    const std::vector<Value>* pool = &pools_[0];

    arena_.assign(static_cast<size_t>(unit->nslots), Value());
    arena_.reserve(4096);
    size_t base = 0;
    Value* L = arena_.data();
    Value* G = globals_.data();

    const bool profiling = opts_.profile;
    const bool memoizing = opts_.memoize;
    double cur_child = 0.0;
    Clock::time_point cur_enter{};
    if (profiling) cur_enter = Clock::now();
    bool cur_memo = false;
    Value cur_key;

    auto slot = [&](int32_t ref) -> Value& {
        return ref >= 0 ? L[ref] : G[global_index(ref)];
    };

    auto record_inputs = [&]() {
        std::vector<uint8_t>& masks =
            types_.input_tags[static_cast<size_t>(unit->func_id)][static_cast<size_t>(ip - code)];
        size_t k = 0;
        for_each_input(*ip, [&](int32_t ref) {
            masks[k++] |= static_cast<uint8_t>(1u << static_cast<unsigned>(slot(ref).tag()));
        });
    };

#define VM_NOTE()                                                                                  \
    do {                                                                                           \
        if constexpr (kCount) {                                                                    \
            counters_.dispatched++;                                                               \
            counters_.per_op[static_cast<size_t>(ip->op)]++;                                      \
        }                                                                                          \
        if constexpr (kRecord) record_inputs();                                                    \
    } while (0)

#ifdef DINOLITE_CGOTO
#define DL_LBL_Rtl(name) &&lbl_##name
#define DL_LBL_Stack(name) &&lbl_bad
#define DL_ROW(name, str, form, fields, r1, r2, r3, rres, win) DL_LBL_##form(name),
    static const void* const kJump[] = {DINOLITE_OPCODES(DL_ROW)};
#undef DL_ROW
#define VM_BEGIN()                                                                                 \
    VM_NOTE();                                                                                     \
    goto* kJump[static_cast<size_t>(ip->op)];
#define VM_CASE(name) lbl_##name:
#define VM_NEXT()                                                                                  \
    do {                                                                                           \
        ++ip;                                                                                      \
        VM_NOTE();                                                                                 \
        goto* kJump[static_cast<size_t>(ip->op)];                                                  \
    } while (0)
#define VM_GOTO(target)                                                                            \
    do {                                                                                           \
        ip = code + (target);                                                                      \
        VM_NOTE();                                                                                 \
        goto* kJump[static_cast<size_t>(ip->op)];                                                  \
    } while (0)
#define VM_END()                                                                                   \
    lbl_bad:                                                                                       \
    throw std::logic_error("stack opcode reached register-transfer dispatch");
#else
#define VM_BEGIN()                                                                                 \
    vm_dispatch:                                                                                   \
    VM_NOTE();                                                                                     \
    switch (ip->op) {
#define VM_CASE(name) case Op::name:
#define VM_NEXT()                                                                                  \
    do {                                                                                           \
        ++ip;                                                                                      \
        goto vm_dispatch;                                                                          \
    } while (0)
#define VM_GOTO(target)                                                                            \
    do {                                                                                           \
        ip = code + (target);                                                                      \
        goto vm_dispatch;                                                                          \
    } while (0)
#define VM_END()                                                                                   \
    default:                                                                                       \
        throw std::logic_error("stack opcode reached register-transfer dispatch");                 \
        }
#endif

    VM_BEGIN()

    VM_CASE(add) {
        ops::arith_add(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }
    VM_CASE(sub) {
        ops::arith_sub(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }
    VM_CASE(mul) {
        ops::arith_mul(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }
    VM_CASE(div) {
        ops::arith_div(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }
    VM_CASE(mod) {
        ops::arith_mod(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }

    VM_CASE(iadd) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization("iadd", "int");
        slot(ip->op1).set_int(ops::wrap_add(a.as_int(), b.as_int()));
        VM_NEXT();
    }
    VM_CASE(isub) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization("isub", "int");
        slot(ip->op1).set_int(ops::wrap_sub(a.as_int(), b.as_int()));
        VM_NEXT();
    }
    VM_CASE(imul) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization("imul", "int");
        slot(ip->op1).set_int(ops::wrap_mul(a.as_int(), b.as_int()));
        VM_NEXT();
    }
    VM_CASE(idiv) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization("idiv", "int");
        slot(ip->op1).set_int(ops::int_div(a.as_int(), b.as_int()));
        VM_NEXT();
    }
    VM_CASE(imod) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization("imod", "int");
        slot(ip->op1).set_int(ops::int_mod(a.as_int(), b.as_int()));
        VM_NEXT();
    }

    VM_CASE(fadd) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Float || b.tag() != Tag::Float)
            ops::bad_specialization("fadd", "float");
        slot(ip->op1).set_float(a.as_float() + b.as_float());
        VM_NEXT();
    }
    VM_CASE(fsub) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Float || b.tag() != Tag::Float)
            ops::bad_specialization("fsub", "float");
        slot(ip->op1).set_float(a.as_float() - b.as_float());
        VM_NEXT();
    }
    VM_CASE(fmul) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Float || b.tag() != Tag::Float)
            ops::bad_specialization("fmul", "float");
        slot(ip->op1).set_float(a.as_float() * b.as_float());
        VM_NEXT();
    }
    VM_CASE(fdiv) {
        const Value& a = slot(ip->op2);
        const Value& b = slot(ip->op3);
        if (a.tag() != Tag::Float || b.tag() != Tag::Float)
            ops::bad_specialization("fdiv", "float");
        slot(ip->op1).set_float(ops::float_div(a.as_float(), b.as_float()));
        VM_NEXT();
    }

    VM_CASE(addi) {
        const Value& s = slot(ip->op2);
        Value& d = slot(ip->op1);
        if (s.tag() == Tag::Int) {
            d.set_int(ops::wrap_add(s.as_int(), ip->imm));
        } else if (s.tag() == Tag::Float) {
            d.set_float(s.as_float() + static_cast<double>(ip->imm));
        } else {
            throw RuntimeError(std::string("cannot add to ") + tag_name(s.tag()));
        }
        VM_NEXT();
    }
    VM_CASE(iaddi) {
        const Value& s = slot(ip->op2);
        if (s.tag() != Tag::Int) ops::bad_specialization("iaddi", "int");
        slot(ip->op1).set_int(ops::wrap_add(s.as_int(), ip->imm));
        VM_NEXT();
    }

    VM_CASE(neg) {
        ops::arith_neg(slot(ip->op1), slot(ip->op2));
        VM_NEXT();
    }
    VM_CASE(not_) {
        slot(ip->op1).set_int(slot(ip->op2).truthy() ? 0 : 1);
        VM_NEXT();
    }

    VM_CASE(lt) {
        slot(ip->op1).set_int(ops::cmp_lt(slot(ip->op2), slot(ip->op3)) ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(le) {
        slot(ip->op1).set_int(ops::cmp_le(slot(ip->op2), slot(ip->op3)) ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(gt) {
        slot(ip->op1).set_int(ops::cmp_gt(slot(ip->op2), slot(ip->op3)) ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(ge) {
        slot(ip->op1).set_int(ops::cmp_ge(slot(ip->op2), slot(ip->op3)) ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(eq) {
        slot(ip->op1).set_int(value_equal(slot(ip->op2), slot(ip->op3)) ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(ne) {
        slot(ip->op1).set_int(value_equal(slot(ip->op2), slot(ip->op3)) ? 0 : 1);
        VM_NEXT();
    }

#define DL_ICMP(name, cmpop)                                                                       \
    VM_CASE(name) {                                                                                \
        const Value& a = slot(ip->op2);                                                            \
        const Value& b = slot(ip->op3);                                                            \
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization(#name, "int");     \
        slot(ip->op1).set_int(a.as_int() cmpop b.as_int() ? 1 : 0);                                \
        VM_NEXT();                                                                                 \
    }
    DL_ICMP(ilt, <)
    DL_ICMP(ile, <=)
    DL_ICMP(igt, >)
    DL_ICMP(ige, >=)
    DL_ICMP(ieq, ==)
    DL_ICMP(ine, !=)
#undef DL_ICMP

#define DL_FCMP(name, cmpop, ordered)                                                              \
    VM_CASE(name) {                                                                                \
        const Value& a = slot(ip->op2);                                                            \
        const Value& b = slot(ip->op3);                                                            \
        if (a.tag() != Tag::Float || b.tag() != Tag::Float)                                        \
            ops::bad_specialization(#name, "float");                                               \
        if (ordered) ops::check_ordered(a.as_float(), b.as_float());                               \
        slot(ip->op1).set_int(a.as_float() cmpop b.as_float() ? 1 : 0);                            \
        VM_NEXT();                                                                                 \
    }
    DL_FCMP(flt, <, true)
    DL_FCMP(fle, <=, true)
    DL_FCMP(fgt, >, true)
    DL_FCMP(fge, >=, true)
    DL_FCMP(feq, ==, false)
    DL_FCMP(fne, !=, false)
#undef DL_FCMP

    VM_CASE(ld) {
        slot(ip->op1) = slot(ip->op2);
        VM_NEXT();
    }
    VM_CASE(ldi) {
        slot(ip->op1).set_int(ip->imm);
        VM_NEXT();
    }
    VM_CASE(ldf) {
        slot(ip->op1).set_float(ip->fimm);
        VM_NEXT();
    }
    VM_CASE(lds) {
        slot(ip->op1) = (*pool)[static_cast<size_t>(ip->cidx)];
        VM_NEXT();
    }
    VM_CASE(ldnil) {
        slot(ip->op1).set_nil();
        VM_NEXT();
    }

    VM_CASE(jmp) { VM_GOTO(ip->pc); }
    VM_CASE(bt) {
        if (slot(ip->op1).truthy()) VM_GOTO(ip->pc);
        VM_NEXT();
    }
    VM_CASE(bf) {
        if (!slot(ip->op1).truthy()) VM_GOTO(ip->pc);
        VM_NEXT();
    }

#define DL_BTCMP(name, test)                                                                       \
    VM_CASE(name) {                                                                                \
        bool taken = (test);                                                                       \
        slot(ip->res).set_int(taken ? 1 : 0);                                                      \
        if (taken) VM_GOTO(ip->pc);                                                                \
        VM_NEXT();                                                                                 \
    }
    DL_BTCMP(btlt, ops::cmp_lt(slot(ip->op1), slot(ip->op2)))
    DL_BTCMP(btle, ops::cmp_le(slot(ip->op1), slot(ip->op2)))
    DL_BTCMP(btgt, ops::cmp_gt(slot(ip->op1), slot(ip->op2)))
    DL_BTCMP(btge, ops::cmp_ge(slot(ip->op1), slot(ip->op2)))
    DL_BTCMP(bteq, value_equal(slot(ip->op1), slot(ip->op2)))
    DL_BTCMP(btne, !value_equal(slot(ip->op1), slot(ip->op2)))
#undef DL_BTCMP

#define DL_IBTCMP(name, cmpop)                                                                     \
    VM_CASE(name) {                                                                                \
        const Value& a = slot(ip->op1);                                                            \
        const Value& b = slot(ip->op2);                                                            \
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization(#name, "int");     \
        bool taken = a.as_int() cmpop b.as_int();                                                  \
        slot(ip->res).set_int(taken ? 1 : 0);                                                      \
        if (taken) VM_GOTO(ip->pc);                                                                \
        VM_NEXT();                                                                                 \
    }
    DL_IBTCMP(ibtlt, <)
    DL_IBTCMP(ibtle, <=)
    DL_IBTCMP(ibtgt, >)
    DL_IBTCMP(ibtge, >=)
    DL_IBTCMP(ibteq, ==)
    DL_IBTCMP(ibtne, !=)
#undef DL_IBTCMP

#define DL_FBTCMP(name, cmpop, ordered)                                                            \
    VM_CASE(name) {                                                                                \
        const Value& a = slot(ip->op1);                                                            \
        const Value& b = slot(ip->op2);                                                            \
        if (a.tag() != Tag::Float || b.tag() != Tag::Float)                                        \
            ops::bad_specialization(#name, "float");                                               \
        if (ordered) ops::check_ordered(a.as_float(), b.as_float());                               \
        bool taken = a.as_float() cmpop b.as_float();                                              \
        slot(ip->res).set_int(taken ? 1 : 0);                                                      \
        if (taken) VM_GOTO(ip->pc);                                                                \
        VM_NEXT();                                                                                 \
    }
    DL_FBTCMP(fbtlt, <, true)
    DL_FBTCMP(fbtle, <=, true)
    DL_FBTCMP(fbtgt, >, true)
    DL_FBTCMP(fbtge, >=, true)
    DL_FBTCMP(fbteq, ==, false)
    DL_FBTCMP(fbtne, !=, false)
#undef DL_FBTCMP

    VM_CASE(btltinc) {
        Value& a = slot(ip->op1);
        ops::add_imm(a, ip->imm);
        bool taken = ops::cmp_lt(a, slot(ip->op2));
        slot(ip->res).set_int(taken ? 1 : 0);
        if (taken) VM_GOTO(ip->pc);
        VM_NEXT();
    }
    VM_CASE(ibtltinc) {
        Value& a = slot(ip->op1);
        const Value& b = slot(ip->op2);
        if (a.tag() != Tag::Int || b.tag() != Tag::Int) ops::bad_specialization("ibtltinc", "int");
        a.set_int(ops::wrap_add(a.as_int(), ip->imm));
        bool taken = a.as_int() < b.as_int();
        slot(ip->res).set_int(taken ? 1 : 0);
        if (taken) VM_GOTO(ip->pc);
        VM_NEXT();
    }

    VM_CASE(mkarr) {
        auto arr = std::make_shared<DynArray>();
        arr->elems.reserve(static_cast<size_t>(ip->n));
        for (int32_t i = 1; i <= ip->n; i++) arr->elems.push_back(slot(ip->op1 + i));
        slot(ip->op1) = Value::make_arr(std::move(arr));
        VM_NEXT();
    }
    VM_CASE(mkfill) {
        const Value& szv = slot(ip->op2);
        if (szv.tag() != Tag::Int)
            throw RuntimeError(std::string("array size must be int, got ") +
                               tag_name(szv.tag()));
        int64_t sz = szv.as_int();
        if (sz < 0) throw RuntimeError("negative array size " + std::to_string(sz));
        if (sz > (int64_t(1) << 32)) throw RuntimeError("array size too large");
        auto arr = std::make_shared<DynArray>();
        arr->elems.assign(static_cast<size_t>(sz), slot(ip->op3));
        slot(ip->op1) = Value::make_arr(std::move(arr));
        VM_NEXT();
    }
    VM_CASE(mktab) {
        auto tab = std::make_shared<AssocTable>();
        for (int32_t i = 0; i < ip->n; i++) {
            tab->put(ops::key_for_lookup(slot(ip->op1 + 1 + 2 * i)), slot(ip->op1 + 2 + 2 * i));
        }
        slot(ip->op1) = Value::make_tab(std::move(tab));
        VM_NEXT();
    }
    VM_CASE(aget) {
        ops::do_aget(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }
    VM_CASE(aset) {
        ops::do_aset(slot(ip->op1), slot(ip->op2), slot(ip->op3));
        VM_NEXT();
    }
    VM_CASE(alen) {
        ops::do_alen(slot(ip->op1), slot(ip->op2));
        VM_NEXT();
    }

    VM_CASE(call) {
        const Value& fv = slot(ip->op2);
        if (fv.tag() != Tag::Fun)
            throw RuntimeError(std::string("call of non-function value (") +
                               tag_name(fv.tag()) + ")");
        const BcUnit& callee = prog_.units[static_cast<size_t>(fv.fun_id())];
        if (ip->n != callee.arity)
            throw RuntimeError("function " + callee.name + " expects " +
                               std::to_string(callee.arity) + " argument(s), got " +
                               std::to_string(ip->n));

        bool want_memo = false;
        Value key;
        if (memoizing && (callee.hints & kHintPure) != 0) {
            const Value* args = L + ip->op3;
            if (memoizable_args(args, ip->n)) {
                auto key_arr = std::make_shared<DynArray>();
                key_arr->elems.assign(args, args + ip->n);
                // Table keys equate 1 and 1.0 like ==; the cache must not, or a
                // memo hit could hand back a result with a different tag.
                for (int32_t i = 0; i < ip->n; i++)
                    key_arr->elems.push_back(
                        Value::make_int(static_cast<int64_t>(args[i].tag())));
                key_arr->frozen = true;
                key = Value::make_arr(std::move(key_arr));
                auto& table = memo_[static_cast<size_t>(callee.func_id)];
                if (!table) table = std::make_unique<AssocTable>();
                if (const Value* hit = table->get(key)) {
                    memo_stats_[static_cast<size_t>(callee.func_id)].hits++;
                    slot(ip->op1) = *hit;
                    VM_NEXT();
                }
                memo_stats_[static_cast<size_t>(callee.func_id)].misses++;
                want_memo = true;
            }
        }

        if (frames_.size() >= kMaxCallDepth) throw RuntimeError("call depth limit exceeded");
        Frame f;
        f.unit = unit;
        f.ret_pc = static_cast<int32_t>(ip - code) + 1;
        f.base = base;
        f.ret_dest = ip->op1;
        f.has_memo_key = cur_memo;
        f.memo_key = std::move(cur_key);
        f.child_seconds = cur_child;
        f.enter = cur_enter;
        frames_.push_back(std::move(f));

        size_t new_base = base + static_cast<size_t>(unit->nslots);
        size_t need = new_base + static_cast<size_t>(callee.nslots);
        if (arena_.size() < need) arena_.resize(need);
        for (int32_t i = 0; i < ip->n; i++) {
            arena_[new_base + static_cast<size_t>(i)] =
                arena_[base + static_cast<size_t>(ip->op3 + i)];
        }
        for (int32_t i = ip->n; i < callee.nslots; i++) {
            arena_[new_base + static_cast<size_t>(i)].set_nil();
        }

        cur_memo = want_memo;
        cur_key = std::move(key);
        profile_.calls[static_cast<size_t>(callee.func_id)]++;
        if (profiling) {
            cur_child = 0.0;
            cur_enter = Clock::now();
        }

        unit = &callee;
        code = unit->rtl.data();
        pool = &pools_[static_cast<size_t>(unit->func_id)];
        base = new_base;
        L = arena_.data() + base;
        VM_GOTO(0);
    }

    VM_CASE(ret) {
        Value result = slot(ip->op1);
        if (profiling) {
            double dt = seconds_since(cur_enter);
            profile_.self_seconds[static_cast<size_t>(unit->func_id)] += dt - cur_child;
            if (!frames_.empty()) frames_.back().child_seconds += dt;
        }
        if (cur_memo && value_is_immutable(result)) {
            memo_[static_cast<size_t>(unit->func_id)]->put(cur_key, result);
        }
        if (frames_.empty()) return; // entry returned: program done

        Frame f = std::move(frames_.back());
        frames_.pop_back();
        unit = f.unit;
        code = unit->rtl.data();
        pool = &pools_[static_cast<size_t>(unit->func_id)];
        base = f.base;
        L = arena_.data() + base;
        cur_memo = f.has_memo_key;
        cur_key = std::move(f.memo_key);
        cur_child = f.child_seconds;
        cur_enter = f.enter;
        slot(f.ret_dest) = std::move(result);
        VM_GOTO(f.ret_pc);
    }

    VM_CASE(builtin) {
        ops::call_builtin(ip->op2, slot(ip->op1), slot(ip->op3), out_, &names_);
        VM_NEXT();
    }

    VM_END()

#undef VM_NOTE
#undef VM_BEGIN
#undef VM_CASE
#undef VM_NEXT
#undef VM_GOTO
#undef VM_END
}

} // namespace

namespace detail {

ExitReport run_rtl(const Program& prog, const RunOptions& opts, std::ostream& out) {
    RtlVm vm(prog, opts, out);
    return vm.run();
}

} // namespace detail

ExitReport run_program(const Program& prog, const RunOptions& opts, std::ostream& out) {
    return prog.is_rtl ? detail::run_rtl(prog, opts, out) : detail::run_stack(prog, opts, out);
}

} // namespace dinolite
