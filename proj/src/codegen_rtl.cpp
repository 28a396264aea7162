#include <algorithm>
#include <cassert>

#include "dinolite/codegen.hpp"

namespace dinolite {

namespace {

bool contains_call(const AstNode& n) {
    if (n.kind == AstKind::Call) {
        return true;
    }
    for (const auto& k : n.kids) {
        if (k && contains_call(*k)) {
            return true;
        }
    }
    return false;
}

class RtlGen {
  public:
    explicit RtlGen(const ResolvedProgram& rp) : rp_(rp) {}

    Program run() {
        out_.is_rtl = true;
        for (const GlobalInfo& g : rp_.globals) {
            out_.globals.push_back({g.name, g.slot, g.fun_index});
        }
        for (const FunctionInfo& fi : rp_.functions) {
            out_.units.push_back(gen_unit(fi));
        }
        validate(out_);
        return std::move(out_);
    }

  private:
    struct LoopCtx {
        std::vector<int> break_patches;
        std::vector<int> continue_patches;
    };

    // ---- emission helpers ----

    int here() const { return int(unit_.rtl.size()); }

    int emit(RtlInstr in) {
        unit_.rtl.push_back(in);
        return int(unit_.rtl.size()) - 1;
    }

    int emit3(Op op, int32_t d, int32_t a, int32_t b) {
        RtlInstr in;
        in.op = op;
        in.op1 = d;
        in.op2 = a;
        in.op3 = b;
        return emit(in);
    }

    void bind(const std::vector<int>& patches, int pc) {
        for (int idx : patches) {
            unit_.rtl[idx].pc = pc;
        }
    }

    // ---- slots ----

    int32_t ref_of(int decl_id) const {
        const Decl& d = rp_.decls[decl_id];
        switch (d.kind) {
        case DeclKind::Local:
        case DeclKind::Param:
            return slot_local(d.slot);
        default:
            return slot_global(d.slot);
        }
    }

    bool is_temp(int32_t ref) const { return !slot_is_global(ref) && ref >= temp_base_; }

    int32_t alloc_temp() {
        int t = temp_next_++;
        temp_high_ = std::max(temp_high_, temp_next_);
        return slot_local(t);
    }

    int save_temps() const { return temp_next_; }
    void restore_temps(int mark) { temp_next_ = mark; }

    // Copies a value out of a mutable location when a later operand could
    // clobber it through a call, preserving left-to-right evaluation.
    int32_t stabilize(int32_t ref, bool later_may_call) {
        if (!later_may_call || is_temp(ref)) {
            return ref;
        }
        int32_t t = alloc_temp();
        emit3(Op::ld, t, ref, 0);
        return t;
    }

    // ---- expressions ----

    int32_t gen_expr(const AstNode& e) {
        if (e.kind == AstKind::IdentRef) {
            return ref_of(e.decl_id);
        }
        int32_t t = alloc_temp();
        gen_expr_into(e, t);
        return t;
    }

    void gen_expr_into(const AstNode& e, int32_t dest) {
        switch (e.kind) {
        case AstKind::Literal:
            switch (e.lit_kind) {
            case LitKind::Int: {
                RtlInstr in;
                in.op = Op::ldi;
                in.op1 = dest;
                in.imm = e.int_val;
                emit(in);
                return;
            }
            case LitKind::Float: {
                RtlInstr in;
                in.op = Op::ldf;
                in.op1 = dest;
                in.fimm = e.float_val;
                emit(in);
                return;
            }
            case LitKind::Str: {
                RtlInstr in;
                in.op = Op::lds;
                in.op1 = dest;
                in.cidx = unit_.add_pool_str(e.str_val);
                emit(in);
                return;
            }
            }
            return;
        case AstKind::IdentRef: {
            int32_t src = ref_of(e.decl_id);
            if (src != dest) {
                emit3(Op::ld, dest, src, 0);
            }
            return;
        }
        case AstKind::Binary:
            gen_binary_into(e, dest);
            return;
        case AstKind::Unary: {
            int32_t s = gen_expr(*e.kids[0]);
            emit3(e.uop == UnOp::Neg ? Op::neg : Op::not_, dest, s, 0);
            return;
        }
        case AstKind::Ternary: {
            std::vector<int> to_else, to_end;
            gen_branch(*e.kids[0], to_else, false);
            gen_expr_into(*e.kids[1], dest);
            RtlInstr j;
            j.op = Op::jmp;
            to_end.push_back(emit(j));
            bind(to_else, here());
            gen_expr_into(*e.kids[2], dest);
            bind(to_end, here());
            return;
        }
        case AstKind::Call:
            gen_call_into(e, dest);
            return;
        case AstKind::Index: {
            bool later = contains_call(*e.kids[1]);
            int32_t base = stabilize(gen_expr(*e.kids[0]), later);
            int32_t idx = gen_expr(*e.kids[1]);
            emit3(Op::aget, dest, base, idx);
            return;
        }
        case AstKind::ArrayLit:
        case AstKind::TableLit: {
            // Constructors read a slot window right above their destination,
            // so they build into a fresh temp and move the result out.
            int mark = save_temps();
            int32_t d = alloc_temp();
            int nslots = int(e.kids.size());
            for (int i = 0; i < nslots; i++) {
                int32_t w = alloc_temp();
                gen_expr_into(*e.kids[i], w);
            }
            RtlInstr in;
            in.op = e.kind == AstKind::ArrayLit ? Op::mkarr : Op::mktab;
            in.op1 = d;
            in.n = e.kind == AstKind::ArrayLit ? nslots : nslots / 2;
            emit(in);
            if (d != dest) {
                emit3(Op::ld, dest, d, 0);
            }
            restore_temps(mark);
            return;
        }
        case AstKind::FillArray: {
            bool later = contains_call(*e.kids[1]);
            int32_t size = stabilize(gen_expr(*e.kids[0]), later);
            int32_t init = gen_expr(*e.kids[1]);
            emit3(Op::mkfill, dest, size, init);
            return;
        }
        default:
            assert(!"unexpected expression node");
        }
    }

    void gen_binary_into(const AstNode& e, int32_t dest) {
        const AstNode& l = *e.kids[0];
        const AstNode& r = *e.kids[1];
        switch (e.op) {
        case BinOp::And:
        case BinOp::Or: {
            // Logical operators produce a canonical 0/1 int.
            std::vector<int> to_true, to_end;
            gen_branch(e, to_true, true);
            RtlInstr zero;
            zero.op = Op::ldi;
            zero.op1 = dest;
            zero.imm = 0;
            emit(zero);
            RtlInstr j;
            j.op = Op::jmp;
            to_end.push_back(emit(j));
            bind(to_true, here());
            RtlInstr one;
            one.op = Op::ldi;
            one.op1 = dest;
            one.imm = 1;
            emit(one);
            bind(to_end, here());
            return;
        }
        default:
            break;
        }

        // x +/- small-int lowers to add-immediate, the shape the combining
        // pass turns into count-and-branch superinstructions.
        if ((e.op == BinOp::Add || e.op == BinOp::Sub) && r.kind == AstKind::Literal &&
            r.lit_kind == LitKind::Int && !(e.op == BinOp::Sub && r.int_val == INT64_MIN)) {
            int32_t a = gen_expr(l);
            RtlInstr in;
            in.op = Op::addi;
            in.op1 = dest;
            in.op2 = a;
            in.imm = e.op == BinOp::Add ? r.int_val : -r.int_val;
            emit(in);
            return;
        }

        int32_t a = stabilize(gen_expr(l), contains_call(r));
        int32_t b = gen_expr(r);
        emit3(binop_opcode(e.op), dest, a, b);
    }

    static Op binop_opcode(BinOp op) {
        switch (op) {
        case BinOp::Add: return Op::add;
        case BinOp::Sub: return Op::sub;
        case BinOp::Mul: return Op::mul;
        case BinOp::Div: return Op::div;
        case BinOp::Mod: return Op::mod;
        case BinOp::Lt: return Op::lt;
        case BinOp::Le: return Op::le;
        case BinOp::Gt: return Op::gt;
        case BinOp::Ge: return Op::ge;
        case BinOp::Eq: return Op::eq;
        case BinOp::Ne: return Op::ne;
        default: break;
        }
        assert(!"not a direct binary opcode");
        return Op::add;
    }

    void gen_call_into(const AstNode& e, int32_t dest) {
        const AstNode& callee = *e.kids[0];
        int argc = int(e.kids.size()) - 1;

        if (callee.kind == AstKind::IdentRef) {
            const Decl& d = rp_.decls[callee.decl_id];
            if (d.kind == DeclKind::Builtin) {
                // len() compiles to the dedicated length opcode.
                if (d.builtin_id == kBuiltinLen) {
                    int32_t s = gen_expr(*e.kids[1]);
                    emit3(Op::alen, dest, s, 0);
                    return;
                }
                int mark = save_temps();
                int32_t base = temp_next_;
                for (int i = 0; i < argc; i++) {
                    int32_t w = alloc_temp();
                    gen_expr_into(*e.kids[1 + i], w);
                }
                RtlInstr in;
                in.op = Op::builtin;
                in.op1 = dest;
                in.op2 = d.builtin_id;
                in.op3 = base;
                in.n = argc;
                emit(in);
                restore_temps(mark);
                return;
            }
        }

        int mark = save_temps();
        int32_t fref;
        if (callee.kind == AstKind::IdentRef) {
            fref = ref_of(callee.decl_id);
        } else {
            fref = gen_expr(callee);
        }
        int32_t base = temp_next_;
        for (int i = 0; i < argc; i++) {
            int32_t w = alloc_temp();
            gen_expr_into(*e.kids[1 + i], w);
        }
        RtlInstr in;
        in.op = Op::call;
        in.op1 = dest;
        in.op2 = fref;
        in.op3 = base;
        in.n = argc;
        emit(in);
        restore_temps(mark);
    }

    // ---- branches ----

    // Emits control flow that transfers to a label when `cond` is truthy
    // (when_true) or falsy (!when_true); the branch instruction indexes are
    // appended to `patches` for later binding.
    void gen_branch(const AstNode& cond, std::vector<int>& patches, bool when_true) {
        switch (cond.kind) {
        case AstKind::Binary:
            switch (cond.op) {
            case BinOp::And:
                if (when_true) {
                    std::vector<int> skip;
                    gen_branch(*cond.kids[0], skip, false);
                    gen_branch(*cond.kids[1], patches, true);
                    bind(skip, here());
                } else {
                    gen_branch(*cond.kids[0], patches, false);
                    gen_branch(*cond.kids[1], patches, false);
                }
                return;
            case BinOp::Or:
                if (when_true) {
                    gen_branch(*cond.kids[0], patches, true);
                    gen_branch(*cond.kids[1], patches, true);
                } else {
                    std::vector<int> skip;
                    gen_branch(*cond.kids[0], skip, true);
                    gen_branch(*cond.kids[1], patches, false);
                    bind(skip, here());
                }
                return;
            case BinOp::Lt:
            case BinOp::Le:
            case BinOp::Gt:
            case BinOp::Ge:
            case BinOp::Eq:
            case BinOp::Ne: {
                // Comparison feeding a branch: the compare-then-branch pair
                // the combiner fuses into a single bt<cmp> instruction.
                int mark = save_temps();
                int32_t a = stabilize(gen_expr(*cond.kids[0]), contains_call(*cond.kids[1]));
                int32_t b = gen_expr(*cond.kids[1]);
                int32_t t = alloc_temp();
                emit3(binop_opcode(cond.op), t, a, b);
                RtlInstr br;
                br.op = when_true ? Op::bt : Op::bf;
                br.op1 = t;
                patches.push_back(emit(br));
                restore_temps(mark);
                return;
            }
            default:
                break;
            }
            break;
        case AstKind::Unary:
            if (cond.uop == UnOp::Not) {
                gen_branch(*cond.kids[0], patches, !when_true);
                return;
            }
            break;
        case AstKind::Literal:
            if (cond.lit_kind == LitKind::Int) {
                if ((cond.int_val != 0) == when_true) {
                    RtlInstr j;
                    j.op = Op::jmp;
                    patches.push_back(emit(j));
                }
                return;
            }
            break;
        default:
            break;
        }
        int mark = save_temps();
        int32_t v = gen_expr(cond);
        RtlInstr br;
        br.op = when_true ? Op::bt : Op::bf;
        br.op1 = v;
        patches.push_back(emit(br));
        restore_temps(mark);
    }

    // ---- statements ----

    void gen_stmt(const AstNode& s) {
        int mark = save_temps();
        switch (s.kind) {
        case AstKind::FunDecl:
            break;
        case AstKind::VarDecl:
        case AstKind::ValDecl:
            if (!s.kids.empty()) {
                gen_expr_into(*s.kids[0], ref_of(s.decl_id));
            }
            break;
        case AstKind::Assign: {
            const AstNode& target = *s.kids[0];
            if (target.kind == AstKind::IdentRef) {
                gen_expr_into(*s.kids[1], ref_of(target.decl_id));
            } else {
                const AstNode& idx_e = *target.kids[1];
                const AstNode& val_e = *s.kids[1];
                bool later1 = contains_call(idx_e) || contains_call(val_e);
                int32_t base = stabilize(gen_expr(*target.kids[0]), later1);
                int32_t idx = stabilize(gen_expr(idx_e), contains_call(val_e));
                int32_t v = gen_expr(val_e);
                emit3(Op::aset, base, idx, v);
            }
            break;
        }
        case AstKind::OpAssign:
            gen_op_assign(s);
            break;
        case AstKind::ExprStmt: {
            int32_t t = alloc_temp();
            gen_expr_into(*s.kids[0], t);
            break;
        }
        case AstKind::If: {
            std::vector<int> to_else, to_end;
            gen_branch(*s.kids[0], to_else, false);
            gen_block(*s.kids[1]);
            if (s.kids.size() == 3) {
                RtlInstr j;
                j.op = Op::jmp;
                to_end.push_back(emit(j));
                bind(to_else, here());
                gen_block(*s.kids[2]);
                bind(to_end, here());
            } else {
                bind(to_else, here());
            }
            break;
        }
        case AstKind::While:
            gen_loop(s.kids[0].get(), nullptr, *s.kids[1]);
            break;
        case AstKind::For: {
            const AstNode& init = *s.kids[0];
            for (const auto& st : init.kids) {
                gen_stmt(*st);
            }
            size_t k = 1;
            const AstNode* cond = nullptr;
            if (s.has_cond) {
                cond = s.kids[k].get();
                k++;
            }
            const AstNode& step = *s.kids[k];
            gen_loop(cond, step.kids.empty() ? nullptr : step.kids[0].get(), *s.kids[k + 1]);
            break;
        }
        case AstKind::Break: {
            RtlInstr j;
            j.op = Op::jmp;
            loops_.back().break_patches.push_back(emit(j));
            break;
        }
        case AstKind::Continue: {
            RtlInstr j;
            j.op = Op::jmp;
            loops_.back().continue_patches.push_back(emit(j));
            break;
        }
        case AstKind::Return: {
            RtlInstr in;
            in.op = Op::ret;
            if (s.kids.empty()) {
                int32_t t = alloc_temp();
                RtlInstr nil;
                nil.op = Op::ldnil;
                nil.op1 = t;
                emit(nil);
                in.op1 = t;
            } else {
                in.op1 = gen_expr(*s.kids[0]);
            }
            emit(in);
            break;
        }
        case AstKind::Block:
            gen_block(s);
            break;
        default: {
            int32_t t = alloc_temp();
            gen_expr_into(s, t);
            break;
        }
        }
        restore_temps(mark);
    }

    void gen_block(const AstNode& b) {
        for (const auto& s : b.kids) {
            gen_stmt(*s);
        }
    }

    // Rotated loop: entry test jumps past the body when false, the body falls
    // through into the step, and a duplicated bottom test branches back up.
    void gen_loop(const AstNode* cond, const AstNode* step, const AstNode& body) {
        std::vector<int> to_exit;
        if (cond) {
            gen_branch(*cond, to_exit, false);
        }
        int body_top = here();
        loops_.push_back({});
        gen_block(body);
        LoopCtx ctx = std::move(loops_.back());
        loops_.pop_back();
        bind(ctx.continue_patches, here());
        if (step) {
            gen_stmt(*step);
        }
        if (cond) {
            std::vector<int> back;
            gen_branch(*cond, back, true);
            bind(back, body_top);
        } else {
            RtlInstr j;
            j.op = Op::jmp;
            j.pc = body_top;
            emit(j);
        }
        bind(ctx.break_patches, here());
        bind(to_exit, here());
    }

    void gen_op_assign(const AstNode& s) {
        const AstNode& target = *s.kids[0];
        const AstNode& val = *s.kids[1];
        if (target.kind == AstKind::IdentRef) {
            int32_t r = ref_of(target.decl_id);
            if ((s.op == BinOp::Add || s.op == BinOp::Sub) && val.kind == AstKind::Literal &&
                val.lit_kind == LitKind::Int && !(s.op == BinOp::Sub && val.int_val == INT64_MIN)) {
                RtlInstr in;
                in.op = Op::addi;
                in.op1 = r;
                in.op2 = r;
                in.imm = s.op == BinOp::Add ? val.int_val : -val.int_val;
                emit(in);
                return;
            }
            int32_t a = stabilize(r, contains_call(val));
            int32_t b = gen_expr(val);
            emit3(binop_opcode(s.op), r, a, b);
            return;
        }
        // a[i] op= v: base and index evaluate once.
        const AstNode& idx_e = *target.kids[1];
        bool later1 = contains_call(idx_e) || contains_call(val);
        int32_t base = stabilize(gen_expr(*target.kids[0]), later1);
        int32_t idx = stabilize(gen_expr(idx_e), contains_call(val));
        int32_t old = alloc_temp();
        emit3(Op::aget, old, base, idx);
        int32_t b = gen_expr(val);
        emit3(binop_opcode(s.op), old, old, b);
        emit3(Op::aset, base, idx, old);
    }

    // ---- units ----

    BcUnit gen_unit(const FunctionInfo& fi) {
        unit_ = BcUnit{};
        unit_.func_id = fi.fun_index;
        unit_.name = fi.is_entry ? "main" : fi.name;
        unit_.arity = fi.arity;
        unit_.hints = fi.hints;
        unit_.src_line = fi.pos.line;
        unit_.declares_nested = fi.declares_nested;
        temp_base_ = fi.named_slots;
        temp_next_ = temp_base_;
        temp_high_ = temp_base_;

        for (const Decl& d : rp_.decls) {
            if ((d.kind == DeclKind::Local || d.kind == DeclKind::Param) &&
                d.owner == fi.fun_index) {
                unit_.vdecls.push_back({d.name, d.slot});
            }
        }

        gen_block(*fi.body);

        // Epilogue: every unit returns nil when control falls off the end.
        int32_t t = alloc_temp();
        RtlInstr nil;
        nil.op = Op::ldnil;
        nil.op1 = t;
        emit(nil);
        RtlInstr r;
        r.op = Op::ret;
        r.op1 = t;
        emit(r);

        unit_.nslots = temp_high_;
#ifndef NDEBUG
        for (const RtlInstr& in : unit_.rtl) {
            assert(!(op_info(in.op).fields & kFPc) || in.pc >= 0);
        }
#endif
        return std::move(unit_);
    }

    const ResolvedProgram& rp_;
    Program out_;
    BcUnit unit_;
    int temp_base_ = 0;
    int temp_next_ = 0;
    int temp_high_ = 0;
    std::vector<LoopCtx> loops_;
};

} // namespace

Program gen_rtl(const ResolvedProgram& rp) {
    return RtlGen(rp).run();
}

} // namespace dinolite
