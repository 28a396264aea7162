#pragma once

#include <string>
#include <string_view>

#include "dinolite/bytecode.hpp"
#include "dinolite/optimizer.hpp"

namespace dinolite {

enum class VmKind { Rtl, Stack };

struct CompileOptions {
    VmKind vm = VmKind::Rtl;
    OptFlags opt{}; // register-transfer pipeline; the stack form has no passes
    std::string source_name = "<input>";
};

struct CompileOutput {
    Program program;
    OptReport report;
};

// Source text through the whole front half: lex/parse/resolve, code
// generation for the requested form, optimizer pipeline. Throws CompileError.
CompileOutput compile_source(std::string_view src, const CompileOptions& opts);

// Whole-file read; throws CompileError ("io") when unreadable.
std::string read_file(const std::string& path);

// True for paths naming bytecode text dumps (.dlb).
bool is_dump_path(const std::string& path);

// Dispatches on the path: .dlb files load as-is (already optimized when they
// were dumped; no passes re-run), everything else compiles as source.
CompileOutput load_program(const std::string& path, const CompileOptions& opts);

} // namespace dinolite
