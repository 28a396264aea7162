#include "dinolite/driver.hpp"

#include <fstream>
#include <sstream>

#include "dinolite/bc_text.hpp"
#include "dinolite/codegen.hpp"
#include "dinolite/parser.hpp"
#include "dinolite/resolver.hpp"

namespace dinolite {

CompileOutput compile_source(std::string_view src, const CompileOptions& opts) {
    ResolvedProgram rp = resolve(parse_program(src));
    CompileOutput out;
    if (opts.vm == VmKind::Rtl) {
        out.program = gen_rtl(rp);
        out.report = optimize(out.program, opts.opt);
    } else {
        out.program = gen_stack(rp);
    }
    out.program.source_name = opts.source_name;
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw CompileError("io", {}, "cannot open " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    if (f.bad()) throw CompileError("io", {}, "cannot read " + path);
    return std::move(buf).str();
}

bool is_dump_path(const std::string& path) {
    return path.size() >= 4 && path.compare(path.size() - 4, 4, ".dlb") == 0;
}

CompileOutput load_program(const std::string& path, const CompileOptions& opts) {
    std::string text = read_file(path);
    if (is_dump_path(path)) {
        CompileOutput out;
        out.program = parse_text(text, path);
        return out;
    }
    CompileOptions o = opts;
    o.source_name = path;
    return compile_source(text, o);
}

} // namespace dinolite
