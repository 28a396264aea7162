#pragma once

#include <string_view>
#include <vector>

#include "dinolite/token.hpp"

namespace dinolite {

// Tokenizes a whole source buffer. The result always ends with an Eof token.
// Throws CompileError on malformed input (bad escapes, stray characters,
// unterminated strings or block comments).
std::vector<Token> tokenize(std::string_view src);

} // namespace dinolite
