#pragma once

#include <stdexcept>
#include <string>

namespace dinolite {

// Exit codes reported by the command line driver.
enum ExitCode {
    kExitOk = 0,
    kExitUsage = 64,
    kExitCompile = 65,
    kExitRuntime = 70,
};

struct SrcPos {
    int line = 0;
    int col = 0;
};

// Lexing, parsing, resolution and bytecode-text errors. All of them abort
// compilation and map to exit code 65.
class CompileError : public std::runtime_error {
  public:
    CompileError(std::string stage, SrcPos pos, const std::string& msg)
        : std::runtime_error(format(stage, pos, msg)), stage_(std::move(stage)), pos_(pos) {}

    const std::string& stage() const { return stage_; }
    SrcPos pos() const { return pos_; }

  private:
    static std::string format(const std::string& stage, SrcPos pos, const std::string& msg) {
        std::string s = stage + " error";
        if (pos.line > 0) {
            s += " at line " + std::to_string(pos.line) + ":" + std::to_string(pos.col);
        }
        s += ": " + msg;
        return s;
    }

    std::string stage_;
    SrcPos pos_;
};

// Guest-program failures: type errors, bad indexing, division by zero and
// friends. Maps to exit code 70.
class RuntimeError : public std::runtime_error {
  public:
    explicit RuntimeError(const std::string& msg) : std::runtime_error("runtime error: " + msg) {}
};

} // namespace dinolite
