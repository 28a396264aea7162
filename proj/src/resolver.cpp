#include "dinolite/resolver.hpp"

#include <unordered_map>

namespace dinolite {

namespace {

class Resolver {
  public:
    ResolvedProgram run(AstPtr root) {
        out_.root = std::move(root);

        // Slot 0 is always the argv array; builtins live outside the global
        // slot table entirely.
        for (int b = 0; b < kBuiltinCount; b++) {
            Decl d;
            d.kind = DeclKind::Builtin;
            d.immutable = true;
            d.name = builtin_name(b);
            d.builtin_id = b;
            int decl_id = add_decl(std::move(d));
            reserved_[builtin_name(b)] = decl_id;
        }
        {
            Decl d;
            d.kind = DeclKind::GlobalVal;
            d.immutable = true;
            d.name = "argv";
            d.slot = 0;
            out_.globals.push_back({"argv", 0, -1, true});
            reserved_["argv"] = add_decl(std::move(d));
        }

        FunctionInfo entry;
        entry.name = "<main>";
        entry.fun_index = 0;
        entry.body = out_.root.get();
        entry.is_entry = true;
        out_.functions.push_back(entry);

        scopes_.push_back({}); // global scope
        current_fun_ = 0;
        hoist_functions(*out_.root, 0);
        for (const auto& s : out_.root->kids) {
            stmt(*s, /*top_level=*/true);
        }
        scopes_.pop_back();
        return std::move(out_);
    }

  private:
    struct Scope {
        std::unordered_map<std::string, int> names;
    };

    [[noreturn]] void fail(SrcPos pos, const std::string& msg) const {
        throw CompileError("resolve", pos, msg);
    }

    int add_decl(Decl d) {
        d.id = int(out_.decls.size());
        out_.decls.push_back(std::move(d));
        return int(out_.decls.size()) - 1;
    }

    void declare(const std::string& name, int decl_id, SrcPos pos) {
        if (reserved_.count(name)) {
            fail(pos, "'" + name + "' is a reserved name");
        }
        auto [it, inserted] = scopes_.back().names.emplace(name, decl_id);
        if (!inserted) {
            fail(pos, "duplicate declaration of '" + name + "' in the same scope");
        }
    }

    // Function names are visible throughout their enclosing scope, so
    // mutually recursive functions need no forward declarations. Each
    // function body is resolved where the declaration appears.
    void hoist_functions(const AstNode& block, int /*enclosing*/) {
        for (const auto& s : block.kids) {
            if (s->kind != AstKind::FunDecl) {
                continue;
            }
            AstNode& fn = const_cast<AstNode&>(*s);
            int fun_index = int(out_.functions.size());

            Decl d;
            d.kind = DeclKind::Function;
            d.immutable = true;
            d.name = fn.name;
            d.fun_index = fun_index;
            d.slot = int(out_.globals.size());
            d.pos = fn.pos;
            int decl_id = add_decl(d);
            declare(fn.name, decl_id, fn.pos);
            fn.decl_id = decl_id;
            out_.globals.push_back({fn.name, d.slot, fun_index, true});

            FunctionInfo info;
            info.name = fn.name;
            info.fun_index = fun_index;
            info.decl_id = decl_id;
            info.body = fn.kids[0].get();
            info.hints = fn.hints;
            info.arity = int(fn.params.size());
            info.pos = fn.pos;
            out_.functions.push_back(std::move(info));
        }
    }

    int lookup(const std::string& name, SrcPos pos) const {
        for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
            auto hit = it->names.find(name);
            if (hit != it->names.end()) {
                return hit->second;
            }
        }
        auto hit = reserved_.find(name);
        if (hit != reserved_.end()) {
            return hit->second;
        }
        fail(pos, "undeclared name '" + name + "'");
    }

    void resolve_fun_body(AstNode& fn) {
        const Decl& d = out_.decls[fn.decl_id];
        int fun_index = d.fun_index;
        FunctionInfo& info = out_.functions[fun_index];
        if (current_fun_ != 0) {
            out_.functions[current_fun_].declares_nested = true;
        }

        int saved_fun = current_fun_;
        current_fun_ = fun_index;

        scopes_.push_back({});
        for (const std::string& p : fn.params) {
            Decl pd;
            pd.kind = DeclKind::Param;
            pd.name = p;
            pd.slot = int(info.param_decl_ids.size());
            pd.owner = fun_index;
            pd.pos = fn.pos;
            int id = add_decl(pd);
            declare(p, id, fn.pos);
            info.param_decl_ids.push_back(id);
            fn.param_decl_ids.push_back(id);
        }
        info.named_slots = info.arity;

        AstNode& body = *fn.kids[0];
        hoist_functions(body, fun_index);
        for (const auto& s : body.kids) {
            stmt(*s, /*top_level=*/false);
        }
        scopes_.pop_back();

        current_fun_ = saved_fun;
    }

    void declare_variable(AstNode& n, bool top_level) {
        bool is_val = n.kind == AstKind::ValDecl;
        Decl d;
        d.name = n.name;
        d.immutable = is_val;
        d.pos = n.pos;
        if (top_level) {
            d.kind = is_val ? DeclKind::GlobalVal : DeclKind::GlobalVar;
            d.slot = int(out_.globals.size());
            out_.globals.push_back({n.name, d.slot, -1, is_val});
        } else {
            d.kind = DeclKind::Local;
            d.owner = current_fun_;
            d.slot = out_.functions[current_fun_].named_slots++;
        }
        int id = add_decl(d);
        declare(n.name, id, n.pos);
        n.decl_id = id;
    }

    void stmt(const AstNode& cn, bool top_level) {
        AstNode& n = const_cast<AstNode&>(cn);
        switch (n.kind) {
        case AstKind::VarDecl:
        case AstKind::ValDecl:
            if (!n.kids.empty()) {
                expr(*n.kids[0]);
            }
            declare_variable(n, top_level);
            return;
        case AstKind::FunDecl:
            resolve_fun_body(n);
            return;
        case AstKind::Assign:
        case AstKind::OpAssign: {
            expr(*n.kids[1]);
            AstNode& target = *n.kids[0];
            expr(target);
            if (target.kind == AstKind::IdentRef) {
                const Decl& d = out_.decls[target.decl_id];
                if (d.immutable) {
                    fail(target.pos, "cannot assign to immutable '" + d.name + "'");
                }
            }
            return;
        }
        case AstKind::If:
        case AstKind::While:
        case AstKind::Return:
        case AstKind::ExprStmt:
            for (const auto& k : n.kids) {
                if (k->kind == AstKind::Block) {
                    block(*k);
                } else {
                    expr(*k);
                }
            }
            return;
        case AstKind::For: {
            // The loop header introduces its own scope covering init, cond,
            // step and body.
            scopes_.push_back({});
            AstNode& init = *n.kids[0];
            for (const auto& s : init.kids) {
                stmt(*s, false);
            }
            size_t k = 1;
            if (n.has_cond) {
                expr(*n.kids[k]);
                k++;
            }
            for (const auto& s : n.kids[k]->kids) {
                stmt(*s, false);
            }
            block(*n.kids[k + 1]);
            scopes_.pop_back();
            return;
        }
        case AstKind::Break:
        case AstKind::Continue:
            return;
        case AstKind::Block:
            block(n);
            return;
        default:
            expr(n);
            return;
        }
    }

    void block(const AstNode& b) {
        scopes_.push_back({});
        hoist_functions(b, current_fun_);
        for (const auto& s : b.kids) {
            stmt(*s, false);
        }
        scopes_.pop_back();
    }

    void expr(const AstNode& cn) {
        AstNode& n = const_cast<AstNode&>(cn);
        switch (n.kind) {
        case AstKind::IdentRef: {
            n.decl_id = lookup(n.name, n.pos);
            const Decl& d = out_.decls[n.decl_id];
            if (d.kind == DeclKind::Builtin) {
                fail(n.pos, "builtin '" + d.name + "' can only be called");
            }
            if ((d.kind == DeclKind::Local || d.kind == DeclKind::Param) &&
                d.owner != current_fun_) {
                fail(n.pos, "'" + d.name + "' is local to an enclosing function; "
                            "nested functions may only use globals and their own locals");
            }
            return;
        }
        case AstKind::Call: {
            AstNode& callee = *n.kids[0];
            if (callee.kind == AstKind::IdentRef) {
                callee.decl_id = lookup(callee.name, callee.pos);
                const Decl& d = out_.decls[callee.decl_id];
                if (d.kind == DeclKind::Builtin) {
                    int want = builtin_arity(d.builtin_id);
                    int got = int(n.kids.size()) - 1;
                    if (got != want) {
                        fail(n.pos, "builtin '" + d.name + "' expects " + std::to_string(want) +
                                        " argument(s), got " + std::to_string(got));
                    }
                } else if ((d.kind == DeclKind::Local || d.kind == DeclKind::Param) &&
                           d.owner != current_fun_) {
                    fail(callee.pos, "'" + d.name + "' is local to an enclosing function");
                }
            } else {
                expr(callee);
            }
            for (size_t i = 1; i < n.kids.size(); i++) {
                expr(*n.kids[i]);
            }
            return;
        }
        case AstKind::Literal:
            return;
        default:
            for (const auto& k : n.kids) {
                expr(*k);
            }
            return;
        }
    }

    ResolvedProgram out_;
    std::vector<Scope> scopes_;
    std::unordered_map<std::string, int> reserved_;
    int current_fun_ = 0;
};

} // namespace

ResolvedProgram resolve(AstPtr root) {
    return Resolver().run(std::move(root));
}

const char* builtin_name(int id) {
    switch (id) {
    case kBuiltinPut: return "put";
    case kBuiltinPutln: return "putln";
    case kBuiltinInt: return "int";
    case kBuiltinFloat: return "float";
    case kBuiltinStr: return "str";
    case kBuiltinLen: return "len";
    case kBuiltinType: return "type";
    }
    return "?";
}

int builtin_arity(int) {
    return 1;
}

} // namespace dinolite
