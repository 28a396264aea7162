#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dinolite/diag.hpp"

namespace dinolite {

enum class Tok : uint8_t {
    // literals and names
    Ident,
    IntLit,
    FloatLit,
    StrLit,
    // keywords
    KwVar,
    KwVal,
    KwFun,
    KwIf,
    KwElse,
    KwFor,
    KwWhile,
    KwBreak,
    KwContinue,
    KwReturn,
    KwTab,
    // punctuation and operators
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Colon,
    Question,
    Assign,
    PlusAssign,
    MinusAssign,
    StarAssign,
    SlashAssign,
    PercentAssign,
    PlusPlus,
    MinusMinus,
    OrOr,
    AndAnd,
    EqEq,
    NotEq,
    Lt,
    LtEq,
    Gt,
    GtEq,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Not, // '!': logical negation, or a hint prefix when followed by a hint name and 'fun'
    Eof,
};

struct Token {
    Tok kind = Tok::Eof;
    SrcPos pos;
    std::string text;   // identifier name or raw spelling
    int64_t int_val = 0;
    double float_val = 0.0;
    std::string str_val; // decoded string literal
};

const char* token_name(Tok kind);

} // namespace dinolite
