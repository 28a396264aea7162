#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dinolite/diag.hpp"

namespace dinolite {

enum class AstKind : uint8_t {
    Program,
    VarDecl,
    ValDecl,
    FunDecl,
    Assign,
    OpAssign,
    If,
    For,
    While,
    Break,
    Continue,
    Return,
    ExprStmt,
    Block,
    Binary,
    Unary,
    Ternary,
    Call,
    Index,
    ArrayLit,
    FillArray,
    TableLit,
    Literal,
    IdentRef,
};

enum class BinOp : uint8_t { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp : uint8_t { Neg, Not };

enum class LitKind : uint8_t { Int, Float, Str };

enum HintBit : uint8_t {
    kHintInline = 1,
    kHintPure = 2,
    kHintJit = 4,
};

// One tree node for every syntactic form. Child layout by kind:
//   Program/Block     statements
//   VarDecl/ValDecl   {init?} (one declarator per node; 'var a, b' parses to two nodes)
//   FunDecl           {body block}
//   Assign            {target, value}
//   OpAssign          {target, value} with op
//   If                {cond, then} or {cond, then, else}
//   For               {init block, cond?, step block, body}; has_cond tells whether
//                     the cond child is present
//   While             {cond, body}
//   Return            {value?}
//   ExprStmt          {expr}
//   Binary/Unary      operands, with op/uop
//   Ternary           {cond, then-expr, else-expr}
//   Call              {callee, args...}
//   Index             {base, index}
//   ArrayLit          elements
//   FillArray         {size, init}
//   TableLit          {key, value, key, value, ...}
//   Literal/IdentRef  leaves
struct AstNode {
    AstKind kind;
    SrcPos pos;
    std::vector<std::unique_ptr<AstNode>> kids;

    std::string name;                // decls, ident-ref
    BinOp op = BinOp::Add;           // binary, op-assign
    UnOp uop = UnOp::Neg;            // unary
    LitKind lit_kind = LitKind::Int; // literal
    int64_t int_val = 0;
    double float_val = 0.0;
    std::string str_val;
    std::vector<std::string> params; // fun-decl
    uint8_t hints = 0;               // fun-decl
    bool has_cond = true;            // for

    // Filled in by the resolver.
    int decl_id = -1;                 // decls and ident-refs
    std::vector<int> param_decl_ids;  // fun-decl

    explicit AstNode(AstKind k, SrcPos p = {}) : kind(k), pos(p) {}
};

using AstPtr = std::unique_ptr<AstNode>;

// Renders the tree back to parseable source. Reparsing the output yields a
// structurally identical tree (checked by ast_equal).
std::string ast_print(const AstNode& root);

// Structural comparison ignoring positions and resolver annotations.
bool ast_equal(const AstNode& a, const AstNode& b);

const char* binop_spelling(BinOp op);

} // namespace dinolite
