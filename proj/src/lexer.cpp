#include "dinolite/lexer.hpp"

#include <cctype>
#include <charconv>
#include <unordered_map>

namespace dinolite {

namespace {

const std::unordered_map<std::string_view, Tok>& keyword_table() {
    static const std::unordered_map<std::string_view, Tok> kw = {
        {"var", Tok::KwVar},         {"val", Tok::KwVal},     {"fun", Tok::KwFun},
        {"if", Tok::KwIf},           {"else", Tok::KwElse},   {"for", Tok::KwFor},
        {"while", Tok::KwWhile},     {"break", Tok::KwBreak}, {"continue", Tok::KwContinue},
        {"return", Tok::KwReturn},   {"tab", Tok::KwTab},
    };
    return kw;
}

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_blanks();
            Token t = next();
            bool done = t.kind == Tok::Eof;
            out.push_back(std::move(t));
            if (done) {
                break;
            }
        }
        return out;
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw CompileError("lex", {line_, int(pos_ - line_start_) + 1}, msg);
    }

    bool eof() const { return pos_ >= src_.size(); }
    char peek(size_t ahead = 0) const {
        return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') {
            line_++;
            line_start_ = pos_;
        }
        return c;
    }

    bool match(char c) {
        if (!eof() && src_[pos_] == c) {
            pos_++;
            return true;
        }
        return false;
    }

    void skip_blanks() {
        for (;;) {
            if (eof()) {
                return;
            }
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '/' && peek(1) == '/') {
                while (!eof() && peek() != '\n') {
                    advance();
                }
            } else if (c == '/' && peek(1) == '*') {
                SrcPos open{line_, int(pos_ - line_start_) + 1};
                advance();
                advance();
                for (;;) {
                    if (eof()) {
                        throw CompileError("lex", open, "unterminated block comment");
                    }
                    if (peek() == '*' && peek(1) == '/') {
                        advance();
                        advance();
                        break;
                    }
                    advance();
                }
            } else {
                return;
            }
        }
    }

    Token make(Tok kind) const {
        Token t;
        t.kind = kind;
        t.pos = start_;
        t.text = std::string(src_.substr(start_off_, pos_ - start_off_));
        return t;
    }

    Token next() {
        start_ = {line_, int(pos_ - line_start_) + 1};
        start_off_ = pos_;
        if (eof()) {
            return make(Tok::Eof);
        }
        char c = advance();
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return number();
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            return ident();
        }
        switch (c) {
        case '"': return string_lit();
        case '(': return make(Tok::LParen);
        case ')': return make(Tok::RParen);
        case '[': return make(Tok::LBracket);
        case ']': return make(Tok::RBracket);
        case '{': return make(Tok::LBrace);
        case '}': return make(Tok::RBrace);
        case ',': return make(Tok::Comma);
        case ';': return make(Tok::Semi);
        case ':': return make(Tok::Colon);
        case '?': return make(Tok::Question);
        case '+':
            if (match('+')) return make(Tok::PlusPlus);
            if (match('=')) return make(Tok::PlusAssign);
            return make(Tok::Plus);
        case '-':
            if (match('-')) return make(Tok::MinusMinus);
            if (match('=')) return make(Tok::MinusAssign);
            return make(Tok::Minus);
        case '*': return make(match('=') ? Tok::StarAssign : Tok::Star);
        case '/': return make(match('=') ? Tok::SlashAssign : Tok::Slash);
        case '%': return make(match('=') ? Tok::PercentAssign : Tok::Percent);
        case '=': return make(match('=') ? Tok::EqEq : Tok::Assign);
        case '!': return make(match('=') ? Tok::NotEq : Tok::Not);
        case '<': return make(match('=') ? Tok::LtEq : Tok::Lt);
        case '>': return make(match('=') ? Tok::GtEq : Tok::Gt);
        case '|':
            if (match('|')) return make(Tok::OrOr);
            fail("expected '||'");
        case '&':
            if (match('&')) return make(Tok::AndAnd);
            fail("expected '&&'");
        default:
            fail(std::string("unexpected character '") + c + "'");
        }
    }

    Token number() {
        while (std::isdigit(static_cast<unsigned char>(peek()))) {
            advance();
        }
        bool is_float = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            is_float = true;
            advance();
            while (std::isdigit(static_cast<unsigned char>(peek()))) {
                advance();
            }
        }
        if (peek() == 'e' || peek() == 'E') {
            size_t mark = pos_;
            advance();
            if (peek() == '+' || peek() == '-') {
                advance();
            }
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                is_float = true;
                while (std::isdigit(static_cast<unsigned char>(peek()))) {
                    advance();
                }
            } else {
                pos_ = mark; // 'e' belongs to a following identifier
            }
        }
        std::string_view text = src_.substr(start_off_, pos_ - start_off_);
        if (is_float) {
            Token t = make(Tok::FloatLit);
            auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.float_val);
            if (ec != std::errc() || p != text.data() + text.size()) {
                fail("malformed float literal");
            }
            return t;
        }
        Token t = make(Tok::IntLit);
        auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), t.int_val);
        if (ec == std::errc::result_out_of_range) {
            fail("integer literal does not fit in 64 bits");
        }
        if (ec != std::errc() || p != text.data() + text.size()) {
            fail("malformed integer literal");
        }
        return t;
    }

    Token ident() {
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
            advance();
        }
        std::string_view text = src_.substr(start_off_, pos_ - start_off_);
        auto it = keyword_table().find(text);
        return make(it != keyword_table().end() ? it->second : Tok::Ident);
    }

    Token string_lit() {
        std::string value;
        for (;;) {
            if (eof() || peek() == '\n') {
                fail("unterminated string literal");
            }
            char c = advance();
            if (c == '"') {
                break;
            }
            if (c == '\\') {
                if (eof()) {
                    fail("unterminated string literal");
                }
                char e = advance();
                switch (e) {
                case 'n': value += '\n'; break;
                case 't': value += '\t'; break;
                case 'r': value += '\r'; break;
                case '\\': value += '\\'; break;
                case '"': value += '"'; break;
                case '0': value += '\0'; break;
                default: fail(std::string("unknown escape '\\") + e + "'");
                }
            } else {
                value += c;
            }
        }
        Token t = make(Tok::StrLit);
        t.str_val = std::move(value);
        return t;
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    size_t line_start_ = 0;
    SrcPos start_;
    size_t start_off_ = 0;
};

} // namespace

std::vector<Token> tokenize(std::string_view src) {
    return Lexer(src).run();
}

const char* token_name(Tok kind) {
    switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::IntLit: return "int literal";
    case Tok::FloatLit: return "float literal";
    case Tok::StrLit: return "string literal";
    case Tok::KwVar: return "'var'";
    case Tok::KwVal: return "'val'";
    case Tok::KwFun: return "'fun'";
    case Tok::KwIf: return "'if'";
    case Tok::KwElse: return "'else'";
    case Tok::KwFor: return "'for'";
    case Tok::KwWhile: return "'while'";
    case Tok::KwBreak: return "'break'";
    case Tok::KwContinue: return "'continue'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwTab: return "'tab'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Question: return "'?'";
    case Tok::Assign: return "'='";
    case Tok::PlusAssign: return "'+='";
    case Tok::MinusAssign: return "'-='";
    case Tok::StarAssign: return "'*='";
    case Tok::SlashAssign: return "'/='";
    case Tok::PercentAssign: return "'%='";
    case Tok::PlusPlus: return "'++'";
    case Tok::MinusMinus: return "'--'";
    case Tok::OrOr: return "'||'";
    case Tok::AndAnd: return "'&&'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::LtEq: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::GtEq: return "'>='";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::Not: return "'!'";
    case Tok::Eof: return "end of input";
    }
    return "?";
}

} // namespace dinolite
