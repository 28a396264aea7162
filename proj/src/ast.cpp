#include "dinolite/ast.hpp"

#include <charconv>
#include <cmath>

namespace dinolite {

namespace {

std::string float_literal(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, p);
    if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
        s.find("inf") == std::string::npos && s.find("nan") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\0': out += "\\0"; break;
        default: out += c;
        }
    }
    out += '"';
    return out;
}

class Printer {
  public:
    std::string run(const AstNode& root) {
        for (const auto& s : root.kids) {
            stmt(*s);
        }
        return std::move(out_);
    }

  private:
    void indent() { out_.append(size_t(depth_) * 4, ' '); }

    void line(const std::string& s) {
        indent();
        out_ += s;
        out_ += '\n';
    }

    // Statements that read as a single line when used as a 'for' clause.
    std::string inline_stmt(const AstNode& n) {
        switch (n.kind) {
        case AstKind::Assign:
            return expr(*n.kids[0]) + " = " + expr(*n.kids[1]);
        case AstKind::OpAssign: {
            const AstNode& val = *n.kids[1];
            if (val.kind == AstKind::Literal && val.lit_kind == LitKind::Int && val.int_val == 1 &&
                (n.op == BinOp::Add || n.op == BinOp::Sub)) {
                return expr(*n.kids[0]) + (n.op == BinOp::Add ? "++" : "--");
            }
            return expr(*n.kids[0]) + " " + binop_spelling(n.op) + "= " + expr(*n.kids[1]);
        }
        case AstKind::ExprStmt:
            return expr(*n.kids[0]);
        default:
            break;
        }
        return "";
    }

    std::string decl_list(const AstNode& first, const AstNode* parent, size_t start, size_t* consumed) {
        // Consecutive VarDecl/ValDecl nodes of the same kind print as one
        // comma-joined declaration, mirroring how the parser expands them.
        std::string s = first.kind == AstKind::VarDecl ? "var " : "val ";
        size_t i = start;
        bool first_item = true;
        while (i < parent->kids.size() && parent->kids[i]->kind == first.kind) {
            const AstNode& d = *parent->kids[i];
            if (!first_item) {
                s += ", ";
            }
            s += d.name;
            if (!d.kids.empty()) {
                s += " = " + expr(*d.kids[0]);
            }
            first_item = false;
            i++;
        }
        *consumed = i - start;
        return s;
    }

    void stmt_list(const AstNode& parent) {
        for (size_t i = 0; i < parent.kids.size();) {
            const AstNode& n = *parent.kids[i];
            if (n.kind == AstKind::VarDecl || n.kind == AstKind::ValDecl) {
                size_t consumed = 0;
                line(decl_list(n, &parent, i, &consumed) + ";");
                i += consumed;
            } else {
                stmt(n);
                i++;
            }
        }
    }

    void block_body(const AstNode& b) {
        depth_++;
        stmt_list(b);
        depth_--;
    }

    void stmt(const AstNode& n) {
        switch (n.kind) {
        case AstKind::VarDecl:
        case AstKind::ValDecl: {
            std::string s = n.kind == AstKind::VarDecl ? "var " : "val ";
            s += n.name;
            if (!n.kids.empty()) {
                s += " = " + expr(*n.kids[0]);
            }
            line(s + ";");
            return;
        }
        case AstKind::FunDecl: {
            std::string h;
            if (n.hints & kHintInline) h += "!inline ";
            if (n.hints & kHintPure) h += "!pure ";
            if (n.hints & kHintJit) h += "!jit ";
            std::string s = h + "fun " + n.name + "(";
            for (size_t i = 0; i < n.params.size(); i++) {
                if (i) s += ", ";
                s += n.params[i];
            }
            line(s + ") {");
            block_body(*n.kids[0]);
            line("}");
            return;
        }
        case AstKind::Assign:
        case AstKind::OpAssign:
        case AstKind::ExprStmt:
            line(inline_stmt(n) + ";");
            return;
        case AstKind::If:
            // The parser wraps every control-flow body in a block, so bodies
            // can be printed with braces unconditionally.
            line("if (" + expr(*n.kids[0]) + ") {");
            block_body(*n.kids[1]);
            if (n.kids.size() == 3) {
                line("} else {");
                block_body(*n.kids[2]);
            }
            line("}");
            return;
        case AstKind::While:
            line("while (" + expr(*n.kids[0]) + ") {");
            block_body(*n.kids[1]);
            line("}");
            return;
        case AstKind::For: {
            const AstNode& init = *n.kids[0];
            std::string s = "for (";
            if (!init.kids.empty()) {
                if (init.kids[0]->kind == AstKind::VarDecl || init.kids[0]->kind == AstKind::ValDecl) {
                    size_t consumed = 0;
                    s += decl_list(*init.kids[0], &init, 0, &consumed);
                } else {
                    s += inline_stmt(*init.kids[0]);
                }
            }
            s += "; ";
            size_t k = 1;
            if (n.has_cond) {
                s += expr(*n.kids[k]);
                k++;
            }
            s += "; ";
            const AstNode& step = *n.kids[k];
            if (!step.kids.empty()) {
                s += inline_stmt(*step.kids[0]);
            }
            line(s + ") {");
            block_body(*n.kids[k + 1]);
            line("}");
            return;
        }
        case AstKind::Break:
            line("break;");
            return;
        case AstKind::Continue:
            line("continue;");
            return;
        case AstKind::Return:
            line(n.kids.empty() ? "return;" : "return " + expr(*n.kids[0]) + ";");
            return;
        case AstKind::Block:
            line("{");
            block_body(n);
            line("}");
            return;
        default:
            line(expr(n) + ";");
            return;
        }
    }

    std::string expr(const AstNode& n) {
        switch (n.kind) {
        case AstKind::Literal:
            switch (n.lit_kind) {
            case LitKind::Int: return std::to_string(n.int_val);
            case LitKind::Float: return float_literal(n.float_val);
            case LitKind::Str: return quote(n.str_val);
            }
            return "";
        case AstKind::IdentRef:
            return n.name;
        case AstKind::Binary:
            return "(" + expr(*n.kids[0]) + " " + binop_spelling(n.op) + " " + expr(*n.kids[1]) +
                   ")";
        case AstKind::Unary:
            return std::string("(") + (n.uop == UnOp::Neg ? "-" : "!") + expr(*n.kids[0]) + ")";
        case AstKind::Ternary:
            return "(" + expr(*n.kids[0]) + " ? " + expr(*n.kids[1]) + " : " + expr(*n.kids[2]) +
                   ")";
        case AstKind::Call: {
            std::string s = expr(*n.kids[0]) + "(";
            for (size_t i = 1; i < n.kids.size(); i++) {
                if (i > 1) s += ", ";
                s += expr(*n.kids[i]);
            }
            return s + ")";
        }
        case AstKind::Index:
            return expr(*n.kids[0]) + "[" + expr(*n.kids[1]) + "]";
        case AstKind::ArrayLit: {
            std::string s = "[";
            for (size_t i = 0; i < n.kids.size(); i++) {
                if (i) s += ", ";
                s += expr(*n.kids[i]);
            }
            return s + "]";
        }
        case AstKind::FillArray:
            return "[" + expr(*n.kids[0]) + " : " + expr(*n.kids[1]) + "]";
        case AstKind::TableLit: {
            std::string s = "tab [";
            for (size_t i = 0; i + 1 < n.kids.size(); i += 2) {
                if (i) s += ", ";
                s += expr(*n.kids[i]) + " : " + expr(*n.kids[i + 1]);
            }
            return s + "]";
        }
        default:
            return "";
        }
    }

    std::string out_;
    int depth_ = 0;
};

} // namespace

std::string ast_print(const AstNode& root) {
    return Printer().run(root);
}

bool ast_equal(const AstNode& a, const AstNode& b) {
    if (a.kind != b.kind || a.name != b.name || a.params != b.params || a.hints != b.hints ||
        a.has_cond != b.has_cond || a.kids.size() != b.kids.size()) {
        return false;
    }
    if (a.kind == AstKind::Binary || a.kind == AstKind::OpAssign) {
        if (a.op != b.op) {
            return false;
        }
    }
    if (a.kind == AstKind::Unary && a.uop != b.uop) {
        return false;
    }
    if (a.kind == AstKind::Literal) {
        if (a.lit_kind != b.lit_kind) {
            return false;
        }
        switch (a.lit_kind) {
        case LitKind::Int:
            if (a.int_val != b.int_val) return false;
            break;
        case LitKind::Float:
            if (!(a.float_val == b.float_val ||
                  (std::isnan(a.float_val) && std::isnan(b.float_val)))) {
                return false;
            }
            break;
        case LitKind::Str:
            if (a.str_val != b.str_val) return false;
            break;
        }
    }
    for (size_t i = 0; i < a.kids.size(); i++) {
        if (!ast_equal(*a.kids[i], *b.kids[i])) {
            return false;
        }
    }
    return true;
}

const char* binop_spelling(BinOp op) {
    switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    }
    return "?";
}

} // namespace dinolite
