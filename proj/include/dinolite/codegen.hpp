#pragma once

#include "dinolite/bytecode.hpp"
#include "dinolite/resolver.hpp"

namespace dinolite {

// Lowers a resolved program to unoptimized register-transfer code. Loops are
// rotated: a guarded entry test falls into the body, and a duplicated bottom
// test branches back, so the back edge is a conditional branch that the
// combining pass can fuse.
Program gen_rtl(const ResolvedProgram& rp);

// Lowers to the stack form used as the performance baseline.
Program gen_stack(const ResolvedProgram& rp);

} // namespace dinolite
