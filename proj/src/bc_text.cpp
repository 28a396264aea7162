#include "dinolite/bc_text.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

#include "dinolite/diag.hpp"

namespace dinolite {

namespace {

void append_quoted(std::string& out, const std::string& s) {
    out += '"';
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
}

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class TextParser {
  public:
    TextParser(std::string_view text, std::string source_name)
        : text_(text) {
        prog_.source_name = std::move(source_name);
        prog_.is_rtl = true;
    }

    Program run() {
        next_line();
        expect_directive(".globals");
        int nglobals = int(take_int_field("n"));
        end_line();
        for (int i = 0; i < nglobals; i++) {
            next_line();
            expect_directive(".gdecl");
            GlobalDecl g;
            g.name = take_name_field("name");
            g.slot = int32_t(take_int_field("slot"));
            if (peek_key("fn")) {
                g.fn = int32_t(take_int_field("fn"));
            }
            end_line();
            if (g.slot != i) {
                fail("global declarations must appear in slot order");
            }
            prog_.globals.push_back(std::move(g));
        }
        while (next_line()) {
            expect_directive(".func");
            parse_unit();
        }
        validate(prog_);
        return std::move(prog_);
    }

  private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw CompileError("bytecode-text", {line_no_, 1}, msg);
    }

    bool next_line() {
        for (;;) {
            if (pos_ >= text_.size()) {
                return false;
            }
            size_t end = text_.find('\n', pos_);
            if (end == std::string_view::npos) {
                end = text_.size();
            }
            line_ = text_.substr(pos_, end - pos_);
            pos_ = end + (end < text_.size() ? 1 : 0);
            line_no_++;
            cursor_ = 0;
            if (!line_.empty()) {
                return true;
            }
        }
    }

    void skip_spaces() {
        while (cursor_ < line_.size() && line_[cursor_] == ' ') {
            cursor_++;
        }
    }

    std::string_view take_word() {
        skip_spaces();
        size_t start = cursor_;
        while (cursor_ < line_.size() && line_[cursor_] != ' ' && line_[cursor_] != '=') {
            cursor_++;
        }
        return line_.substr(start, cursor_ - start);
    }

    void expect_directive(std::string_view d) {
        if (take_word() != d) {
            fail("expected '" + std::string(d) + "' directive");
        }
    }

    bool peek_key(std::string_view key) {
        size_t save = cursor_;
        std::string_view w = take_word();
        bool hit = w == key && cursor_ < line_.size() && line_[cursor_] == '=';
        cursor_ = save;
        return hit;
    }

    void expect_key(std::string_view key) {
        std::string_view w = take_word();
        if (w != key || cursor_ >= line_.size() || line_[cursor_] != '=') {
            fail("expected field '" + std::string(key) + "='");
        }
        cursor_++; // '='
    }

    int64_t take_int_field(std::string_view key) {
        expect_key(key);
        size_t start = cursor_;
        if (cursor_ < line_.size() && (line_[cursor_] == '-' || line_[cursor_] == '+')) {
            cursor_++;
        }
        while (cursor_ < line_.size() && std::isdigit((unsigned char)line_[cursor_])) {
            cursor_++;
        }
        int64_t v = 0;
        auto [p, ec] = std::from_chars(line_.data() + start, line_.data() + cursor_, v);
        if (ec != std::errc() || p != line_.data() + cursor_ || cursor_ == start) {
            fail("malformed integer in field '" + std::string(key) + "'");
        }
        return v;
    }

    double take_float_field(std::string_view key) {
        expect_key(key);
        size_t start = cursor_;
        while (cursor_ < line_.size() && line_[cursor_] != ' ') {
            cursor_++;
        }
        double v = 0;
        auto [p, ec] = std::from_chars(line_.data() + start, line_.data() + cursor_, v);
        if (ec != std::errc() || p != line_.data() + cursor_ || cursor_ == start) {
            fail("malformed float in field '" + std::string(key) + "'");
        }
        return v;
    }

    std::string take_name_field(std::string_view key) {
        expect_key(key);
        size_t start = cursor_;
        while (cursor_ < line_.size() && line_[cursor_] != ' ') {
            cursor_++;
        }
        if (cursor_ == start) {
            fail("empty name field");
        }
        return std::string(line_.substr(start, cursor_ - start));
    }

    std::string take_quoted_field(std::string_view key) {
        expect_key(key);
        if (cursor_ >= line_.size() || line_[cursor_] != '"') {
            fail("expected quoted value");
        }
        cursor_++;
        std::string out;
        for (;;) {
            if (cursor_ >= line_.size()) {
                fail("unterminated quoted value");
            }
            char c = line_[cursor_++];
            if (c == '"') {
                break;
            }
            if (c == '\\') {
                if (cursor_ >= line_.size()) {
                    fail("unterminated escape");
                }
                char e = line_[cursor_++];
                switch (e) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '\\': out += '\\'; break;
                case '"': out += '"'; break;
                case '0': out += '\0'; break;
                default: fail("unknown escape in quoted value");
                }
            } else {
                out += c;
            }
        }
        return out;
    }

    void end_line() {
        skip_spaces();
        if (cursor_ != line_.size()) {
            fail("trailing characters on line");
        }
    }

    void parse_unit() {
        BcUnit u;
        u.name = take_name_field("name");
        u.func_id = int(take_int_field("id"));
        u.arity = int(take_int_field("arity"));
        u.nslots = int(take_int_field("nslots"));
        u.hints = uint8_t(take_int_field("hints"));
        end_line();
        if (u.func_id != int(prog_.units.size())) {
            fail("function ids must be dense and in order");
        }

        bool saw_end = false;
        while (next_line()) {
            skip_spaces();
            if (cursor_ < line_.size() && line_[cursor_] == '.') {
                std::string_view d = take_word();
                if (d == ".end") {
                    end_line();
                    saw_end = true;
                    break;
                }
                if (d == ".vdecl") {
                    VDecl v;
                    v.name = take_name_field("name");
                    v.slot = int32_t(take_int_field("slot"));
                    end_line();
                    u.vdecls.push_back(std::move(v));
                    continue;
                }
                if (d == ".str") {
                    int idx = int(take_int_field("idx"));
                    if (idx != int(u.pool.size())) {
                        fail("string pool entries must appear in index order");
                    }
                    PoolConst c;
                    c.kind = PoolConst::Kind::Str;
                    c.s = take_quoted_field("value");
                    end_line();
                    u.pool.push_back(std::move(c));
                    continue;
                }
                fail("unknown directive inside a function");
            }
            parse_instr(u);
        }
        if (!saw_end) {
            fail("missing .end for function '" + u.name + "'");
        }
        prog_.units.push_back(std::move(u));
    }

    void parse_instr(BcUnit& u) {
        int64_t idx = 0;
        {
            std::string_view w = take_word();
            auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), idx);
            if (ec != std::errc() || p != w.data() + w.size()) {
                fail("expected an instruction index");
            }
        }
        if (idx != int64_t(u.rtl.size())) {
            fail("instruction indexes must be dense and in order");
        }
        std::string_view opname = take_word();
        int code = op_by_name(opname.data(), opname.size(), OpForm::Rtl);
        if (code < 0) {
            fail("unknown opcode '" + std::string(opname) + "'");
        }
        RtlInstr in;
        in.op = Op(code);
        const OpInfo& info = op_info(in.op);
        if (info.fields & kFOp1) in.op1 = int32_t(take_int_field("op1"));
        if (info.fields & kFOp2) in.op2 = int32_t(take_int_field("op2"));
        if (info.fields & kFOp3) in.op3 = int32_t(take_int_field("op3"));
        if (info.fields & kFImmInt) in.imm = take_int_field("imm");
        if (info.fields & kFImmFloat) in.fimm = take_float_field("imm");
        if (info.fields & kFCidx) in.cidx = int32_t(take_int_field("cidx"));
        if (info.fields & kFRes) in.res = int32_t(take_int_field("res"));
        if (info.fields & kFPc) in.pc = int32_t(take_int_field("pc"));
        if (info.fields & kFN) in.n = int32_t(take_int_field("n"));
        end_line();
        u.rtl.push_back(in);
    }

    std::string_view text_;
    size_t pos_ = 0;
    std::string_view line_;
    size_t cursor_ = 0;
    int line_no_ = 0;
    Program prog_;
};

} // namespace

std::string dump_text(const Program& prog) {
    if (!prog.is_rtl) {
        throw CompileError("bytecode", {}, "only register-transfer programs can be dumped");
    }
    std::string out;
    out += ".globals n=" + std::to_string(prog.globals.size()) + "\n";
    for (const GlobalDecl& g : prog.globals) {
        out += ".gdecl name=" + g.name + " slot=" + std::to_string(g.slot);
        if (g.fn >= 0) {
            out += " fn=" + std::to_string(g.fn);
        }
        out += "\n";
    }
    for (const BcUnit& u : prog.units) {
        out += ".func name=" + u.name + " id=" + std::to_string(u.func_id) +
               " arity=" + std::to_string(u.arity) + " nslots=" + std::to_string(u.nslots) +
               " hints=" + std::to_string(u.hints) + "\n";
        for (const VDecl& v : u.vdecls) {
            out += ".vdecl name=" + v.name + " slot=" + std::to_string(v.slot) + "\n";
        }
        for (size_t i = 0; i < u.pool.size(); i++) {
            out += ".str idx=" + std::to_string(i) + " value=";
            append_quoted(out, u.pool[i].s);
            out += "\n";
        }
        for (size_t i = 0; i < u.rtl.size(); i++) {
            const RtlInstr& in = u.rtl[i];
            const OpInfo& info = op_info(in.op);
            out += std::to_string(i) + " " + info.name;
            if (info.fields & kFOp1) out += " op1=" + std::to_string(in.op1);
            if (info.fields & kFOp2) out += " op2=" + std::to_string(in.op2);
            if (info.fields & kFOp3) out += " op3=" + std::to_string(in.op3);
            if (info.fields & kFImmInt) out += " imm=" + std::to_string(in.imm);
            if (info.fields & kFImmFloat) out += " imm=" + format_float(in.fimm);
            if (info.fields & kFCidx) out += " cidx=" + std::to_string(in.cidx);
            if (info.fields & kFRes) out += " res=" + std::to_string(in.res);
            if (info.fields & kFPc) out += " pc=" + std::to_string(in.pc);
            if (info.fields & kFN) out += " n=" + std::to_string(in.n);
            out += "\n";
        }
        out += ".end\n";
    }
    return out;
}

Program parse_text(std::string_view text, const std::string& source_name) {
    return TextParser(text, source_name).run();
}

} // namespace dinolite
