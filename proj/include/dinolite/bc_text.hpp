#pragma once

#include <string>
#include <string_view>

#include "dinolite/bytecode.hpp"

namespace dinolite {

// Serializes a register-transfer program to the textual bytecode form.
// dump_text(parse_text(s)) == s for any dump the serializer produced.
std::string dump_text(const Program& prog);

// Parses the textual form back into a validated program. Throws CompileError
// ("bytecode-text") with a line number on malformed input.
Program parse_text(std::string_view text, const std::string& source_name);

} // namespace dinolite
