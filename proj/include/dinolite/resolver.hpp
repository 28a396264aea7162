#pragma once

#include <string>
#include <vector>

#include "dinolite/ast.hpp"

namespace dinolite {

enum class DeclKind : uint8_t {
    GlobalVar,
    GlobalVal,
    Local,    // named local or loop-scoped declaration inside a function body
    Param,
    Function, // immutable binding to a function value, stored in a global slot
    Builtin,
};

enum BuiltinId {
    kBuiltinPut = 0,
    kBuiltinPutln = 1,
    kBuiltinInt = 2,
    kBuiltinFloat = 3,
    kBuiltinStr = 4,
    kBuiltinLen = 5,
    kBuiltinType = 6,
    kBuiltinCount = 7,
};

struct Decl {
    int id = -1;
    DeclKind kind = DeclKind::Local;
    bool immutable = false;
    std::string name;
    int slot = -1;       // global index, or frame slot for locals/params
    int fun_index = -1;  // for Function decls
    int builtin_id = -1; // for Builtin decls
    int owner = -1;      // fun_index owning a local/param
    SrcPos pos;
};

struct FunctionInfo {
    std::string name;
    int fun_index = 0;
    int decl_id = -1;            // -1 for the implicit entry function
    const AstNode* body = nullptr; // Block, or the Program node for the entry
    std::vector<int> param_decl_ids;
    uint8_t hints = 0;
    int arity = 0;
    int named_slots = 0; // params plus named locals; codegen temps start here
    bool declares_nested = false;
    bool is_entry = false;
    SrcPos pos;
};

struct GlobalInfo {
    std::string name;
    int slot = -1;
    int fun_index = -1; // preloaded function binding, or -1
    bool immutable = false;
};

struct ResolvedProgram {
    AstPtr root;
    std::vector<Decl> decls;
    std::vector<FunctionInfo> functions; // functions[0] is the entry
    std::vector<GlobalInfo> globals;     // globals[i] describes slot i; slot 0 is argv
};

// Binds every identifier to a declaration, assigns global and frame slots,
// and flattens the function tree. Throws CompileError ("resolve") on
// undeclared names, duplicate declarations, writes to immutable bindings,
// references to reserved names, locals captured by nested functions, and
// builtin misuse.
ResolvedProgram resolve(AstPtr root);

const char* builtin_name(int id);
int builtin_arity(int id);

} // namespace dinolite
