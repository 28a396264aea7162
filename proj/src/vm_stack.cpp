#include <chrono>
#include <memory>
#include <new>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dinolite/collections.hpp"
#include "dinolite/vm.hpp"
#include "vm_ops.hpp"

#if (defined(__GNUC__) || defined(__clang__)) && !defined(DINOLITE_NO_CGOTO)
#define DINOLITE_CGOTO 1
#endif

namespace dinolite {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SFrame {
    const BcUnit* unit;
    int32_t ret_pc;
    size_t base;
    size_t stack_floor; // caller's operand stack height at suspension
    double child_seconds;
    Clock::time_point enter;
};

// The stack-form twin of the register-transfer VM. Hint-driven memoization
// and type recording are pipeline features and do not exist here; profile
// collection works the same way.
class StackVm {
  public:
    StackVm(const Program& prog, const RunOptions& opts, std::ostream& out)
        : prog_(prog), opts_(opts), out_(out) {}

    ExitReport run() {
        globals_ = detail::prepare_globals(prog_, opts_.argv);
        pools_ = detail::materialize_pools(prog_);
        names_ = detail::collect_fun_names(prog_);

        size_t nunits = prog_.units.size();
        profile_.calls.assign(nunits, 0);
        profile_.self_seconds.assign(nunits, 0.0);
        profile_.timed = opts_.profile;

        ExitReport report;
        profile_.calls[0] = 1;
        Clock::time_point t0 = Clock::now();
        try {
            if (opts_.count_ops) {
                exec<true>();
            } else {
                exec<false>();
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
        report.memo.assign(nunits, MemoFuncStats{});
        return report;
    }

  private:
    template <bool kCount> void exec();

    const Program& prog_;
    const RunOptions& opts_;
    std::ostream& out_;

    std::vector<Value> globals_;
    std::vector<Value> slots_;
    std::vector<Value> stack_;
    std::vector<SFrame> frames_;
    std::vector<std::vector<Value>> pools_;
    FunNames names_;
    ExecCounters counters_;
    ProfileData profile_;
};

template <bool kCount> void StackVm::exec() {
    const BcUnit* unit = &prog_.units[0];
    const StackInstr* code = unit->stack.data();
    const StackInstr* ip = code;
    const std::vector<Value>* pool = &pools_[0];

    slots_.assign(static_cast<size_t>(unit->nslots), Value());
    slots_.reserve(4096);
    stack_.reserve(1024);
    size_t base = 0;
    Value* L = slots_.data();
    Value* G = globals_.data();

    const bool profiling = opts_.profile;
    double cur_child = 0.0;
    Clock::time_point cur_enter{};
    if (profiling) cur_enter = Clock::now();
    size_t cur_floor = 0;

    auto slot = [&](int64_t ref) -> Value& {
        return ref >= 0 ? L[ref] : G[global_index(static_cast<int32_t>(ref))];
    };
    auto pop = [&]() -> Value {
        Value v = std::move(stack_.back());
        stack_.pop_back();
        return v;
    };
    auto top = [&]() -> Value& { return stack_.back(); };
    auto top2 = [&]() -> Value& { return stack_[stack_.size() - 2]; };

#define VM_NOTE()                                                                                  \
    do {                                                                                           \
        if constexpr (kCount) {                                                                    \
            counters_.dispatched++;                                                               \
            counters_.per_op[static_cast<size_t>(ip->op)]++;                                      \
        }                                                                                          \
    } while (0)

#ifdef DINOLITE_CGOTO
#define DL_LBL_Rtl(name) &&lbl_bad
#define DL_LBL_Stack(name) &&lbl_##name
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
    throw std::logic_error("register-transfer opcode reached stack dispatch");
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
        throw std::logic_error("register-transfer opcode reached stack dispatch");                 \
        }
#endif

    VM_BEGIN()

    VM_CASE(spushi) {
        stack_.push_back(Value::make_int(ip->operand));
        VM_NEXT();
    }
    VM_CASE(spushc) {
        stack_.push_back((*pool)[static_cast<size_t>(ip->cidx)]);
        VM_NEXT();
    }
    VM_CASE(spushnil) {
        stack_.push_back(Value());
        VM_NEXT();
    }
    VM_CASE(sload) {
        stack_.push_back(slot(ip->operand));
        VM_NEXT();
    }
    VM_CASE(sstore) {
        slot(ip->operand) = pop();
        VM_NEXT();
    }
    VM_CASE(spop) {
        stack_.pop_back();
        VM_NEXT();
    }

    VM_CASE(sadd) {
        Value& a = top2();
        ops::arith_add(a, a, top());
        stack_.pop_back();
        VM_NEXT();
    }
    VM_CASE(ssub) {
        Value& a = top2();
        ops::arith_sub(a, a, top());
        stack_.pop_back();
        VM_NEXT();
    }
    VM_CASE(smul) {
        Value& a = top2();
        ops::arith_mul(a, a, top());
        stack_.pop_back();
        VM_NEXT();
    }
    VM_CASE(sdiv) {
        Value& a = top2();
        ops::arith_div(a, a, top());
        stack_.pop_back();
        VM_NEXT();
    }
    VM_CASE(smod) {
        Value& a = top2();
        ops::arith_mod(a, a, top());
        stack_.pop_back();
        VM_NEXT();
    }
    VM_CASE(sneg) {
        Value& a = top();
        ops::arith_neg(a, a);
        VM_NEXT();
    }
    VM_CASE(snot) {
        Value& a = top();
        a.set_int(a.truthy() ? 0 : 1);
        VM_NEXT();
    }

    VM_CASE(slt) {
        Value& a = top2();
        bool r = ops::cmp_lt(a, top());
        stack_.pop_back();
        a.set_int(r ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(sle) {
        Value& a = top2();
        bool r = ops::cmp_le(a, top());
        stack_.pop_back();
        a.set_int(r ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(sgt) {
        Value& a = top2();
        bool r = ops::cmp_gt(a, top());
        stack_.pop_back();
        a.set_int(r ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(sge) {
        Value& a = top2();
        bool r = ops::cmp_ge(a, top());
        stack_.pop_back();
        a.set_int(r ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(seq) {
        Value& a = top2();
        bool r = value_equal(a, top());
        stack_.pop_back();
        a.set_int(r ? 1 : 0);
        VM_NEXT();
    }
    VM_CASE(sne) {
        Value& a = top2();
        bool r = value_equal(a, top());
        stack_.pop_back();
        a.set_int(r ? 0 : 1);
        VM_NEXT();
    }

    VM_CASE(sjmp) { VM_GOTO(ip->operand); }
    VM_CASE(sbrt) {
        bool taken = pop().truthy();
        if (taken) VM_GOTO(ip->operand);
        VM_NEXT();
    }
    VM_CASE(sbrf) {
        bool taken = !pop().truthy();
        if (taken) VM_GOTO(ip->operand);
        VM_NEXT();
    }

    VM_CASE(smkarr) {
        size_t n = static_cast<size_t>(ip->operand);
        auto arr = std::make_shared<DynArray>();
        arr->elems.assign(std::make_move_iterator(stack_.end() - static_cast<ptrdiff_t>(n)),
                          std::make_move_iterator(stack_.end()));
        stack_.resize(stack_.size() - n);
        stack_.push_back(Value::make_arr(std::move(arr)));
        VM_NEXT();
    }
    VM_CASE(smkfill) {
        Value init = pop();
        Value szv = pop();
        if (szv.tag() != Tag::Int)
            throw RuntimeError(std::string("array size must be int, got ") +
                               tag_name(szv.tag()));
        int64_t sz = szv.as_int();
        if (sz < 0) throw RuntimeError("negative array size " + std::to_string(sz));
        if (sz > (int64_t(1) << 32)) throw RuntimeError("array size too large");
        auto arr = std::make_shared<DynArray>();
        arr->elems.assign(static_cast<size_t>(sz), init);
        stack_.push_back(Value::make_arr(std::move(arr)));
        VM_NEXT();
    }
    VM_CASE(smktab) {
        size_t n = static_cast<size_t>(ip->operand);
        auto tab = std::make_shared<AssocTable>();
        size_t first = stack_.size() - 2 * n;
        for (size_t i = 0; i < n; i++) {
            tab->put(ops::key_for_lookup(stack_[first + 2 * i]), stack_[first + 2 * i + 1]);
        }
        stack_.resize(first);
        stack_.push_back(Value::make_tab(std::move(tab)));
        VM_NEXT();
    }
    VM_CASE(saget) {
        Value idx = pop();
        Value& b = top();
        ops::do_aget(b, b, idx);
        VM_NEXT();
    }
    VM_CASE(saset) {
        Value v = pop();
        Value idx = pop();
        Value b = pop();
        ops::do_aset(b, idx, v);
        VM_NEXT();
    }
    VM_CASE(salen) {
        Value& b = top();
        ops::do_alen(b, b);
        VM_NEXT();
    }

    VM_CASE(scall) {
        int32_t n = static_cast<int32_t>(ip->operand);
        size_t callee_pos = stack_.size() - static_cast<size_t>(n) - 1;
        const Value& fv = stack_[callee_pos];
        if (fv.tag() != Tag::Fun)
            throw RuntimeError(std::string("call of non-function value (") +
                               tag_name(fv.tag()) + ")");
        const BcUnit& callee = prog_.units[static_cast<size_t>(fv.fun_id())];
        if (n != callee.arity)
            throw RuntimeError("function " + callee.name + " expects " +
                               std::to_string(callee.arity) + " argument(s), got " +
                               std::to_string(n));

        if (frames_.size() >= kMaxCallDepth) throw RuntimeError("call depth limit exceeded");
        frames_.push_back(SFrame{unit, static_cast<int32_t>(ip - code) + 1, base, cur_floor,
                                 cur_child, cur_enter});

        size_t new_base = base + static_cast<size_t>(unit->nslots);
        size_t need = new_base + static_cast<size_t>(callee.nslots);
        if (slots_.size() < need) slots_.resize(need);
        for (int32_t i = 0; i < n; i++) {
            slots_[new_base + static_cast<size_t>(i)] =
                std::move(stack_[callee_pos + 1 + static_cast<size_t>(i)]);
        }
        for (int32_t i = n; i < callee.nslots; i++) {
            slots_[new_base + static_cast<size_t>(i)].set_nil();
        }
        stack_.resize(callee_pos);
        cur_floor = callee_pos;

        profile_.calls[static_cast<size_t>(callee.func_id)]++;
        if (profiling) {
            cur_child = 0.0;
            cur_enter = Clock::now();
        }

        unit = &callee;
        code = unit->stack.data();
        pool = &pools_[static_cast<size_t>(unit->func_id)];
        base = new_base;
        L = slots_.data() + base;
        VM_GOTO(0);
    }

    VM_CASE(sret) {
        Value result = pop();
        if (profiling) {
            double dt = seconds_since(cur_enter);
            profile_.self_seconds[static_cast<size_t>(unit->func_id)] += dt - cur_child;
            if (!frames_.empty()) frames_.back().child_seconds += dt;
        }
        if (frames_.empty()) return;

        stack_.resize(cur_floor);
        SFrame f = frames_.back();
        frames_.pop_back();
        unit = f.unit;
        code = unit->stack.data();
        pool = &pools_[static_cast<size_t>(unit->func_id)];
        base = f.base;
        L = slots_.data() + base;
        cur_floor = f.stack_floor;
        cur_child = f.child_seconds;
        cur_enter = f.enter;
        stack_.push_back(std::move(result));
        VM_GOTO(f.ret_pc);
    }

    VM_CASE(sbuiltin) {
        Value& a = top();
        ops::call_builtin(static_cast<int32_t>(ip->operand), a, a, out_, &names_);
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

ExitReport run_stack(const Program& prog, const RunOptions& opts, std::ostream& out) {
    StackVm vm(prog, opts, out);
    return vm.run();
}

} // namespace detail

} // namespace dinolite
