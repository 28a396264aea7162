#include <algorithm>
#include <cassert>

#include "dinolite/codegen.hpp"

namespace dinolite {

namespace {

class StackGen {
  public:
    explicit StackGen(const ResolvedProgram& rp) : rp_(rp) {}

    Program run() {
        out_.is_rtl = false;
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

    int here() const { return int(unit_.stack.size()); }

    int emit(Op op, int64_t operand = 0) {
        StackInstr in;
        in.op = op;
        in.operand = operand;
        unit_.stack.push_back(in);
        return int(unit_.stack.size()) - 1;
    }

    void bind(const std::vector<int>& patches, int pc) {
        for (int idx : patches) {
            unit_.stack[idx].operand = pc;
        }
    }

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

    // Scratch slots above the named locals, used when a value is needed more
    // than once (index compound assignment).
    int32_t alloc_hidden() {
        int t = hidden_next_++;
        hidden_high_ = std::max(hidden_high_, hidden_next_);
        return slot_local(t);
    }

    int save_hidden() const { return hidden_next_; }
    void restore_hidden(int mark) { hidden_next_ = mark; }

    // ---- expressions: each leaves exactly one value on the stack ----

    void gen_expr(const AstNode& e) {
        switch (e.kind) {
        case AstKind::Literal:
            switch (e.lit_kind) {
            case LitKind::Int:
                emit(Op::spushi, e.int_val);
                return;
            case LitKind::Float: {
                StackInstr in;
                in.op = Op::spushc;
                in.cidx = unit_.add_pool_float(e.float_val);
                unit_.stack.push_back(in);
                return;
            }
            case LitKind::Str: {
                StackInstr in;
                in.op = Op::spushc;
                in.cidx = unit_.add_pool_str(e.str_val);
                unit_.stack.push_back(in);
                return;
            }
            }
            return;
        case AstKind::IdentRef:
            emit(Op::sload, ref_of(e.decl_id));
            return;
        case AstKind::Binary:
            gen_binary(e);
            return;
        case AstKind::Unary:
            gen_expr(*e.kids[0]);
            emit(e.uop == UnOp::Neg ? Op::sneg : Op::snot);
            return;
        case AstKind::Ternary: {
            std::vector<int> to_else, to_end;
            gen_branch(*e.kids[0], to_else, false);
            gen_expr(*e.kids[1]);
            to_end.push_back(emit(Op::sjmp));
            bind(to_else, here());
            gen_expr(*e.kids[2]);
            bind(to_end, here());
            return;
        }
        case AstKind::Call:
            gen_call(e);
            return;
        case AstKind::Index:
            gen_expr(*e.kids[0]);
            gen_expr(*e.kids[1]);
            emit(Op::saget);
            return;
        case AstKind::ArrayLit:
            for (const auto& k : e.kids) {
                gen_expr(*k);
            }
            emit(Op::smkarr, int64_t(e.kids.size()));
            return;
        case AstKind::TableLit:
            for (const auto& k : e.kids) {
                gen_expr(*k);
            }
            emit(Op::smktab, int64_t(e.kids.size()) / 2);
            return;
        case AstKind::FillArray:
            gen_expr(*e.kids[0]);
            gen_expr(*e.kids[1]);
            emit(Op::smkfill);
            return;
        default:
            assert(!"unexpected expression node");
        }
    }

    void gen_binary(const AstNode& e) {
        switch (e.op) {
        case BinOp::And:
        case BinOp::Or: {
            std::vector<int> to_true, to_end;
            gen_branch(e, to_true, true);
            emit(Op::spushi, 0);
            to_end.push_back(emit(Op::sjmp));
            bind(to_true, here());
            emit(Op::spushi, 1);
            bind(to_end, here());
            return;
        }
        default:
            break;
        }
        gen_expr(*e.kids[0]);
        gen_expr(*e.kids[1]);
        emit(binop_opcode(e.op));
    }

    static Op binop_opcode(BinOp op) {
        switch (op) {
        case BinOp::Add: return Op::sadd;
        case BinOp::Sub: return Op::ssub;
        case BinOp::Mul: return Op::smul;
        case BinOp::Div: return Op::sdiv;
        case BinOp::Mod: return Op::smod;
        case BinOp::Lt: return Op::slt;
        case BinOp::Le: return Op::sle;
        case BinOp::Gt: return Op::sgt;
        case BinOp::Ge: return Op::sge;
        case BinOp::Eq: return Op::seq;
        case BinOp::Ne: return Op::sne;
        default: break;
        }
        assert(!"not a direct binary opcode");
        return Op::sadd;
    }

    void gen_call(const AstNode& e) {
        const AstNode& callee = *e.kids[0];
        int argc = int(e.kids.size()) - 1;
        if (callee.kind == AstKind::IdentRef) {
            const Decl& d = rp_.decls[callee.decl_id];
            if (d.kind == DeclKind::Builtin) {
                if (d.builtin_id == kBuiltinLen) {
                    gen_expr(*e.kids[1]);
                    emit(Op::salen);
                    return;
                }
                for (int i = 0; i < argc; i++) {
                    gen_expr(*e.kids[1 + i]);
                }
                emit(Op::sbuiltin, d.builtin_id);
                return;
            }
        }
        gen_expr(callee);
        for (int i = 0; i < argc; i++) {
            gen_expr(*e.kids[1 + i]);
        }
        emit(Op::scall, argc);
    }

    void gen_branch(const AstNode& cond, std::vector<int>& patches, bool when_true) {
        if (cond.kind == AstKind::Binary) {
            if (cond.op == BinOp::And) {
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
            }
            if (cond.op == BinOp::Or) {
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
            }
        }
        if (cond.kind == AstKind::Unary && cond.uop == UnOp::Not) {
            gen_branch(*cond.kids[0], patches, !when_true);
            return;
        }
        if (cond.kind == AstKind::Literal && cond.lit_kind == LitKind::Int) {
            if ((cond.int_val != 0) == when_true) {
                patches.push_back(emit(Op::sjmp));
            }
            return;
        }
        gen_expr(cond);
        patches.push_back(emit(when_true ? Op::sbrt : Op::sbrf));
    }

    // ---- statements ----

    void gen_stmt(const AstNode& s) {
        switch (s.kind) {
        case AstKind::FunDecl:
            break;
        case AstKind::VarDecl:
        case AstKind::ValDecl:
            if (!s.kids.empty()) {
                gen_expr(*s.kids[0]);
                emit(Op::sstore, ref_of(s.decl_id));
            }
            break;
        case AstKind::Assign: {
            const AstNode& target = *s.kids[0];
            if (target.kind == AstKind::IdentRef) {
                gen_expr(*s.kids[1]);
                emit(Op::sstore, ref_of(target.decl_id));
            } else {
                gen_expr(*target.kids[0]);
                gen_expr(*target.kids[1]);
                gen_expr(*s.kids[1]);
                emit(Op::saset);
            }
            break;
        }
        case AstKind::OpAssign:
            gen_op_assign(s);
            break;
        case AstKind::ExprStmt:
            gen_expr(*s.kids[0]);
            emit(Op::spop);
            break;
        case AstKind::If: {
            std::vector<int> to_else, to_end;
            gen_branch(*s.kids[0], to_else, false);
            gen_block(*s.kids[1]);
            if (s.kids.size() == 3) {
                to_end.push_back(emit(Op::sjmp));
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
        case AstKind::Break:
            loops_.back().break_patches.push_back(emit(Op::sjmp));
            break;
        case AstKind::Continue:
            loops_.back().continue_patches.push_back(emit(Op::sjmp));
            break;
        case AstKind::Return:
            if (s.kids.empty()) {
                emit(Op::spushnil);
            } else {
                gen_expr(*s.kids[0]);
            }
            emit(Op::sret);
            break;
        case AstKind::Block:
            gen_block(s);
            break;
        default:
            gen_expr(s);
            emit(Op::spop);
            break;
        }
    }

    void gen_block(const AstNode& b) {
        for (const auto& s : b.kids) {
            gen_stmt(*s);
        }
    }

    // Same rotated shape as the register-transfer form so both VMs execute
    // the same number of iterations and tests.
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
            emit(Op::sjmp, body_top);
        }
        bind(ctx.break_patches, here());
        bind(to_exit, here());
    }

    void gen_op_assign(const AstNode& s) {
        const AstNode& target = *s.kids[0];
        if (target.kind == AstKind::IdentRef) {
            int32_t r = ref_of(target.decl_id);
            emit(Op::sload, r);
            gen_expr(*s.kids[1]);
            emit(binop_opcode(s.op));
            emit(Op::sstore, r);
            return;
        }
        // a[i] op= v evaluates a and i once into scratch slots.
        int mark = save_hidden();
        int32_t tb = alloc_hidden();
        int32_t ti = alloc_hidden();
        gen_expr(*target.kids[0]);
        emit(Op::sstore, tb);
        gen_expr(*target.kids[1]);
        emit(Op::sstore, ti);
        emit(Op::sload, tb);
        emit(Op::sload, ti);
        emit(Op::sload, tb);
        emit(Op::sload, ti);
        emit(Op::saget);
        gen_expr(*s.kids[1]);
        emit(binop_opcode(s.op));
        emit(Op::saset);
        restore_hidden(mark);
    }

    BcUnit gen_unit(const FunctionInfo& fi) {
        unit_ = BcUnit{};
        unit_.func_id = fi.fun_index;
        unit_.name = fi.is_entry ? "main" : fi.name;
        unit_.arity = fi.arity;
        unit_.hints = fi.hints;
        unit_.src_line = fi.pos.line;
        unit_.declares_nested = fi.declares_nested;
        hidden_next_ = fi.named_slots;
        hidden_high_ = fi.named_slots;

        for (const Decl& d : rp_.decls) {
            if ((d.kind == DeclKind::Local || d.kind == DeclKind::Param) &&
                d.owner == fi.fun_index) {
                unit_.vdecls.push_back({d.name, d.slot});
            }
        }

        gen_block(*fi.body);
        emit(Op::spushnil);
        emit(Op::sret);

        unit_.nslots = hidden_high_;
        return std::move(unit_);
    }

    const ResolvedProgram& rp_;
    Program out_;
    BcUnit unit_;
    int hidden_next_ = 0;
    int hidden_high_ = 0;
    std::vector<LoopCtx> loops_;
};

} // namespace

Program gen_stack(const ResolvedProgram& rp) {
    return StackGen(rp).run();
}

} // namespace dinolite
