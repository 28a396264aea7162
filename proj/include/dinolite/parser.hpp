#pragma once

#include <string_view>

#include "dinolite/ast.hpp"

namespace dinolite {

// Parses a full program into an AST with a Program root. Control-flow bodies
// are normalized to blocks and multi-declarator var/val statements are
// expanded to one node per declarator. Throws CompileError on syntax errors.
AstPtr parse_program(std::string_view src);

} // namespace dinolite
