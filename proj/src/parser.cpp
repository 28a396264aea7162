#include "dinolite/parser.hpp"

#include "dinolite/lexer.hpp"

namespace dinolite {

namespace {

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    AstPtr run() {
        auto prog = node(AstKind::Program);
        while (!at(Tok::Eof)) {
            stmt_into(prog->kids);
        }
        return prog;
    }

  private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& ahead(size_t n) const {
        size_t i = pos_ + n;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    bool at(Tok k) const { return cur().kind == k; }

    Token take() { return toks_[pos_++]; }

    bool accept(Tok k) {
        if (at(k)) {
            pos_++;
            return true;
        }
        return false;
    }

    Token expect(Tok k, const char* what) {
        if (!at(k)) {
            fail(std::string("expected ") + token_name(k) + " " + what + ", found " +
                 token_name(cur().kind));
        }
        return take();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw CompileError("parse", cur().pos, msg);
    }

    AstPtr node(AstKind k) const { return std::make_unique<AstNode>(k, cur().pos); }
    AstPtr node_at(AstKind k, SrcPos p) const { return std::make_unique<AstNode>(k, p); }

    // ---- statements ----

    void stmt_into(std::vector<AstPtr>& out) {
        switch (cur().kind) {
        case Tok::KwVar:
        case Tok::KwVal:
            decl_into(out);
            expect(Tok::Semi, "after declaration");
            return;
        case Tok::Not:
            if (looks_like_hinted_fun()) {
                out.push_back(fun_decl());
                return;
            }
            break;
        case Tok::KwFun:
            out.push_back(fun_decl());
            return;
        default:
            break;
        }
        out.push_back(plain_stmt());
    }

    // A '!' token opens a hint prefix only when a chain of '!name' pairs ends
    // at 'fun'. Anything else is a negation expression statement.
    bool looks_like_hinted_fun() const {
        size_t i = 0;
        while (ahead(i).kind == Tok::Not && ahead(i + 1).kind == Tok::Ident) {
            i += 2;
        }
        return i > 0 && ahead(i).kind == Tok::KwFun;
    }

    void decl_into(std::vector<AstPtr>& out) {
        bool is_val = cur().kind == Tok::KwVal;
        take();
        for (;;) {
            Token name = expect(Tok::Ident, "in declaration");
            auto d = node_at(is_val ? AstKind::ValDecl : AstKind::VarDecl, name.pos);
            d->name = name.text;
            if (accept(Tok::Assign)) {
                d->kids.push_back(expr());
            } else if (is_val) {
                fail("'val' declaration requires an initializer");
            }
            out.push_back(std::move(d));
            if (!accept(Tok::Comma)) {
                break;
            }
        }
    }

    AstPtr fun_decl() {
        auto fn = node(AstKind::FunDecl);
        while (accept(Tok::Not)) {
            Token h = expect(Tok::Ident, "as hint name");
            if (h.text == "inline") {
                fn->hints |= kHintInline;
            } else if (h.text == "pure") {
                fn->hints |= kHintPure;
            } else if (h.text == "jit") {
                fn->hints |= kHintJit;
            } else {
                throw CompileError("parse", h.pos, "unknown hint '!" + h.text + "'");
            }
        }
        expect(Tok::KwFun, "to declare a function");
        fn->name = expect(Tok::Ident, "as function name").text;
        if (accept(Tok::LParen)) {
            if (!at(Tok::RParen)) {
                for (;;) {
                    fn->params.push_back(expect(Tok::Ident, "as parameter name").text);
                    if (!accept(Tok::Comma)) {
                        break;
                    }
                }
            }
            expect(Tok::RParen, "after parameters");
        }
        int saved_depth = loop_depth_;
        loop_depth_ = 0;
        fn->kids.push_back(block());
        loop_depth_ = saved_depth;
        return fn;
    }

    AstPtr block() {
        auto b = node(AstKind::Block);
        expect(Tok::LBrace, "to open a block");
        while (!at(Tok::RBrace)) {
            if (at(Tok::Eof)) {
                fail("unterminated block");
            }
            stmt_into(b->kids);
        }
        take();
        return b;
    }

    // Wraps a single statement in a block so control-flow bodies are uniform.
    AstPtr body_stmt() {
        if (at(Tok::LBrace)) {
            return block();
        }
        auto b = node(AstKind::Block);
        if (accept(Tok::Semi)) {
            return b; // empty body, e.g. 'while (f());'
        }
        stmt_into(b->kids);
        return b;
    }

    AstPtr plain_stmt() {
        switch (cur().kind) {
        case Tok::KwIf: {
            auto n = node(AstKind::If);
            take();
            expect(Tok::LParen, "after 'if'");
            n->kids.push_back(expr());
            expect(Tok::RParen, "after condition");
            n->kids.push_back(body_stmt());
            if (accept(Tok::KwElse)) {
                n->kids.push_back(body_stmt());
            }
            return n;
        }
        case Tok::KwWhile: {
            auto n = node(AstKind::While);
            take();
            expect(Tok::LParen, "after 'while'");
            n->kids.push_back(expr());
            expect(Tok::RParen, "after condition");
            loop_depth_++;
            n->kids.push_back(body_stmt());
            loop_depth_--;
            return n;
        }
        case Tok::KwFor:
            return for_stmt();
        case Tok::KwBreak: {
            if (loop_depth_ == 0) {
                fail("'break' outside of a loop");
            }
            auto n = node(AstKind::Break);
            take();
            expect(Tok::Semi, "after 'break'");
            return n;
        }
        case Tok::KwContinue: {
            if (loop_depth_ == 0) {
                fail("'continue' outside of a loop");
            }
            auto n = node(AstKind::Continue);
            take();
            expect(Tok::Semi, "after 'continue'");
            return n;
        }
        case Tok::KwReturn: {
            auto n = node(AstKind::Return);
            take();
            if (!at(Tok::Semi)) {
                n->kids.push_back(expr());
            }
            expect(Tok::Semi, "after 'return'");
            return n;
        }
        case Tok::LBrace:
            return block();
        case Tok::Semi:
            take();
            return std::make_unique<AstNode>(AstKind::Block);
        default: {
            auto n = simple_stmt();
            expect(Tok::Semi, "after statement");
            return n;
        }
        }
    }

    AstPtr for_stmt() {
        auto n = node(AstKind::For);
        take();
        expect(Tok::LParen, "after 'for'");
        auto init = node(AstKind::Block);
        if (!at(Tok::Semi)) {
            if (at(Tok::KwVar) || at(Tok::KwVal)) {
                decl_into(init->kids);
            } else {
                init->kids.push_back(simple_stmt());
            }
        }
        expect(Tok::Semi, "after loop initializer");
        n->kids.push_back(std::move(init));
        n->has_cond = !at(Tok::Semi);
        if (n->has_cond) {
            n->kids.push_back(expr());
        }
        expect(Tok::Semi, "after loop condition");
        auto step = node(AstKind::Block);
        if (!at(Tok::RParen)) {
            step->kids.push_back(simple_stmt());
        }
        n->kids.push_back(std::move(step));
        expect(Tok::RParen, "after loop header");
        loop_depth_++;
        n->kids.push_back(body_stmt());
        loop_depth_--;
        return n;
    }

    // Assignment, compound assignment, increment/decrement or a bare
    // expression; used for expression statements and 'for' clauses.
    AstPtr simple_stmt() {
        SrcPos p = cur().pos;
        AstPtr lhs = expr();
        BinOp op;
        switch (cur().kind) {
        case Tok::Assign: {
            take();
            check_target(*lhs);
            auto n = node_at(AstKind::Assign, p);
            n->kids.push_back(std::move(lhs));
            n->kids.push_back(expr());
            return n;
        }
        case Tok::PlusAssign: op = BinOp::Add; break;
        case Tok::MinusAssign: op = BinOp::Sub; break;
        case Tok::StarAssign: op = BinOp::Mul; break;
        case Tok::SlashAssign: op = BinOp::Div; break;
        case Tok::PercentAssign: op = BinOp::Mod; break;
        case Tok::PlusPlus:
        case Tok::MinusMinus: {
            op = at(Tok::PlusPlus) ? BinOp::Add : BinOp::Sub;
            take();
            check_target(*lhs);
            auto one = node_at(AstKind::Literal, p);
            one->lit_kind = LitKind::Int;
            one->int_val = 1;
            auto n = node_at(AstKind::OpAssign, p);
            n->op = op;
            n->kids.push_back(std::move(lhs));
            n->kids.push_back(std::move(one));
            return n;
        }
        default: {
            auto n = node_at(AstKind::ExprStmt, p);
            n->kids.push_back(std::move(lhs));
            return n;
        }
        }
        take();
        check_target(*lhs);
        auto n = node_at(AstKind::OpAssign, p);
        n->op = op;
        n->kids.push_back(std::move(lhs));
        n->kids.push_back(expr());
        return n;
    }

    void check_target(const AstNode& lhs) const {
        if (lhs.kind != AstKind::IdentRef && lhs.kind != AstKind::Index) {
            throw CompileError("parse", lhs.pos, "assignment target must be a name or an index");
        }
    }

    // ---- expressions, by descending precedence ----

    AstPtr expr() { return ternary(); }

    AstPtr ternary() {
        AstPtr cond = or_expr();
        if (!at(Tok::Question)) {
            return cond;
        }
        auto n = node(AstKind::Ternary);
        take();
        n->kids.push_back(std::move(cond));
        n->kids.push_back(expr());
        expect(Tok::Colon, "in conditional expression");
        n->kids.push_back(ternary());
        return n;
    }

    AstPtr or_expr() {
        AstPtr l = and_expr();
        while (at(Tok::OrOr)) {
            SrcPos p = take().pos;
            auto n = node_at(AstKind::Binary, p);
            n->op = BinOp::Or;
            n->kids.push_back(std::move(l));
            n->kids.push_back(and_expr());
            l = std::move(n);
        }
        return l;
    }

    AstPtr and_expr() {
        AstPtr l = equality();
        while (at(Tok::AndAnd)) {
            SrcPos p = take().pos;
            auto n = node_at(AstKind::Binary, p);
            n->op = BinOp::And;
            n->kids.push_back(std::move(l));
            n->kids.push_back(equality());
            l = std::move(n);
        }
        return l;
    }

    AstPtr binary_level(AstPtr (Parser::*next)(), std::initializer_list<std::pair<Tok, BinOp>> ops) {
        AstPtr l = (this->*next)();
        for (;;) {
            bool matched = false;
            BinOp op = BinOp::Add;
            for (const auto& [t, b] : ops) {
                if (at(t)) {
                    op = b;
                    matched = true;
                    break;
                }
            }
            if (!matched) {
                return l;
            }
            SrcPos p = take().pos;
            auto n = node_at(AstKind::Binary, p);
            n->op = op;
            n->kids.push_back(std::move(l));
            n->kids.push_back((this->*next)());
            l = std::move(n);
        }
    }

    AstPtr equality() {
        return binary_level(&Parser::relational, {{Tok::EqEq, BinOp::Eq}, {Tok::NotEq, BinOp::Ne}});
    }

    AstPtr relational() {
        return binary_level(&Parser::additive, {{Tok::Lt, BinOp::Lt},
                                                {Tok::LtEq, BinOp::Le},
                                                {Tok::Gt, BinOp::Gt},
                                                {Tok::GtEq, BinOp::Ge}});
    }

    AstPtr additive() {
        return binary_level(&Parser::multiplicative,
                            {{Tok::Plus, BinOp::Add}, {Tok::Minus, BinOp::Sub}});
    }

    AstPtr multiplicative() {
        return binary_level(
            &Parser::unary,
            {{Tok::Star, BinOp::Mul}, {Tok::Slash, BinOp::Div}, {Tok::Percent, BinOp::Mod}});
    }

    AstPtr unary() {
        if (at(Tok::Minus) || at(Tok::Not)) {
            UnOp op = at(Tok::Minus) ? UnOp::Neg : UnOp::Not;
            SrcPos p = take().pos;
            AstPtr operand = unary();
            // Fold negation into numeric literals so '-1' is one literal.
            if (op == UnOp::Neg && operand->kind == AstKind::Literal) {
                if (operand->lit_kind == LitKind::Int) {
                    operand->int_val = int64_t(0 - uint64_t(operand->int_val));
                    return operand;
                }
                if (operand->lit_kind == LitKind::Float) {
                    operand->float_val = -operand->float_val;
                    return operand;
                }
            }
            auto n = node_at(AstKind::Unary, p);
            n->uop = op;
            n->kids.push_back(std::move(operand));
            return n;
        }
        return postfix();
    }

    AstPtr postfix() {
        AstPtr e = primary();
        for (;;) {
            if (at(Tok::LParen)) {
                SrcPos p = take().pos;
                auto n = node_at(AstKind::Call, p);
                n->kids.push_back(std::move(e));
                if (!at(Tok::RParen)) {
                    for (;;) {
                        n->kids.push_back(expr());
                        if (!accept(Tok::Comma)) {
                            break;
                        }
                    }
                }
                expect(Tok::RParen, "after arguments");
                e = std::move(n);
            } else if (at(Tok::LBracket)) {
                SrcPos p = take().pos;
                auto n = node_at(AstKind::Index, p);
                n->kids.push_back(std::move(e));
                n->kids.push_back(expr());
                expect(Tok::RBracket, "after index");
                e = std::move(n);
            } else {
                return e;
            }
        }
    }

    AstPtr primary() {
        switch (cur().kind) {
        case Tok::IntLit: {
            auto n = node(AstKind::Literal);
            n->lit_kind = LitKind::Int;
            n->int_val = take().int_val;
            return n;
        }
        case Tok::FloatLit: {
            auto n = node(AstKind::Literal);
            n->lit_kind = LitKind::Float;
            n->float_val = take().float_val;
            return n;
        }
        case Tok::StrLit: {
            auto n = node(AstKind::Literal);
            n->lit_kind = LitKind::Str;
            n->str_val = take().str_val;
            return n;
        }
        case Tok::Ident: {
            auto n = node(AstKind::IdentRef);
            n->name = take().text;
            return n;
        }
        case Tok::LParen: {
            take();
            AstPtr e = expr();
            expect(Tok::RParen, "to close a parenthesized expression");
            return e;
        }
        case Tok::LBracket:
            return array_lit();
        case Tok::KwTab:
            return table_lit();
        default:
            fail(std::string("expected an expression, found ") + token_name(cur().kind));
        }
    }

    // '[' starts either an element list or a '[size : init]' fill form; the
    // colon after the first fully parsed expression decides.
    AstPtr array_lit() {
        SrcPos p = take().pos;
        if (accept(Tok::RBracket)) {
            return node_at(AstKind::ArrayLit, p);
        }
        AstPtr first = expr();
        if (accept(Tok::Colon)) {
            auto n = node_at(AstKind::FillArray, p);
            n->kids.push_back(std::move(first));
            n->kids.push_back(expr());
            expect(Tok::RBracket, "after array fill");
            return n;
        }
        auto n = node_at(AstKind::ArrayLit, p);
        n->kids.push_back(std::move(first));
        while (accept(Tok::Comma)) {
            n->kids.push_back(expr());
        }
        expect(Tok::RBracket, "after array elements");
        return n;
    }

    AstPtr table_lit() {
        SrcPos p = take().pos;
        expect(Tok::LBracket, "after 'tab'");
        auto n = node_at(AstKind::TableLit, p);
        if (!at(Tok::RBracket)) {
            for (;;) {
                n->kids.push_back(expr());
                expect(Tok::Colon, "between table key and value");
                n->kids.push_back(expr());
                if (!accept(Tok::Comma)) {
                    break;
                }
            }
        }
        expect(Tok::RBracket, "after table entries");
        return n;
    }

    std::vector<Token> toks_;
    size_t pos_ = 0;
    int loop_depth_ = 0;
};

} // namespace

AstPtr parse_program(std::string_view src) {
    return Parser(tokenize(src)).run();
}

} // namespace dinolite
