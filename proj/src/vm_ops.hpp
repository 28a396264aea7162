#pragma once

// Operand semantics shared by both VMs. Everything here is inline and takes
// plain Value references so the dispatch loops stay free of virtual calls.

#include <cmath>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "dinolite/bytecode.hpp"
#include "dinolite/diag.hpp"
#include "dinolite/value.hpp"
#include "dinolite/vm.hpp"

namespace dinolite::ops {

inline int64_t wrap_add(int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}
inline int64_t wrap_sub(int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}
inline int64_t wrap_mul(int64_t a, int64_t b) {
    return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
}
inline int64_t wrap_neg(int64_t a) {
    return static_cast<int64_t>(0 - static_cast<uint64_t>(a));
}

inline int64_t int_div(int64_t a, int64_t b) {
    if (b == 0) throw RuntimeError("integer division by zero");
    if (b == -1 && a == INT64_MIN) return a; // wrap; -a overflows
    return a / b;
}
inline int64_t int_mod(int64_t a, int64_t b) {
    if (b == 0) throw RuntimeError("integer modulo by zero");
    if (b == -1) return 0;
    return a % b;
}
inline double float_div(double a, double b) {
    if (b == 0.0) throw RuntimeError("float division by zero");
    return a / b;
}

[[noreturn]] inline void bad_operands(const char* what, const Value& a, const Value& b) {
    throw RuntimeError(std::string("cannot ") + what + " " + tag_name(a.tag()) + " and " +
                       tag_name(b.tag()));
}

inline void arith_add(Value& d, const Value& a, const Value& b) {
    if (a.tag() == Tag::Int && b.tag() == Tag::Int) {
        d.set_int(wrap_add(a.as_int(), b.as_int()));
    } else if (a.is_number() && b.is_number()) {
        d.set_float(a.number() + b.number());
    } else if (a.tag() == Tag::Str && b.tag() == Tag::Str) {
        d = Value::make_str(a.str() + b.str());
    } else {
        bad_operands("add", a, b);
    }
}

inline void arith_sub(Value& d, const Value& a, const Value& b) {
    if (a.tag() == Tag::Int && b.tag() == Tag::Int) {
        d.set_int(wrap_sub(a.as_int(), b.as_int()));
    } else if (a.is_number() && b.is_number()) {
        d.set_float(a.number() - b.number());
    } else {
        bad_operands("subtract", a, b);
    }
}

inline void arith_mul(Value& d, const Value& a, const Value& b) {
    if (a.tag() == Tag::Int && b.tag() == Tag::Int) {
        d.set_int(wrap_mul(a.as_int(), b.as_int()));
    } else if (a.is_number() && b.is_number()) {
        d.set_float(a.number() * b.number());
    } else {
        bad_operands("multiply", a, b);
    }
}

inline void arith_div(Value& d, const Value& a, const Value& b) {
    if (a.tag() == Tag::Int && b.tag() == Tag::Int) {
        d.set_int(int_div(a.as_int(), b.as_int()));
    } else if (a.is_number() && b.is_number()) {
        d.set_float(float_div(a.number(), b.number()));
    } else {
        bad_operands("divide", a, b);
    }
}

inline void arith_mod(Value& d, const Value& a, const Value& b) {
    if (a.tag() == Tag::Int && b.tag() == Tag::Int) {
        d.set_int(int_mod(a.as_int(), b.as_int()));
    } else {
        bad_operands("take modulo of", a, b);
    }
}

// a += imm on int or float operands; used by the generic immediate-add and
// fused loop-step opcodes.
inline void add_imm(Value& a, int64_t imm) {
    if (a.tag() == Tag::Int) {
        a.set_int(wrap_add(a.as_int(), imm));
    } else if (a.tag() == Tag::Float) {
        a.set_float(a.as_float() + static_cast<double>(imm));
    } else {
        throw RuntimeError(std::string("cannot add to ") + tag_name(a.tag()));
    }
}

inline void arith_neg(Value& d, const Value& a) {
    if (a.tag() == Tag::Int) {
        d.set_int(wrap_neg(a.as_int()));
    } else if (a.tag() == Tag::Float) {
        d.set_float(-a.as_float());
    } else {
        throw RuntimeError(std::string("cannot negate ") + tag_name(a.tag()));
    }
}

inline bool cmp_lt(const Value& a, const Value& b) { return value_compare(a, b) < 0; }
inline bool cmp_le(const Value& a, const Value& b) { return value_compare(a, b) <= 0; }
inline bool cmp_gt(const Value& a, const Value& b) { return value_compare(a, b) > 0; }
inline bool cmp_ge(const Value& a, const Value& b) { return value_compare(a, b) >= 0; }

// Table keys must hash, so mutable aggregates are deep-frozen into a private
// copy for the duration of the operation.
inline Value key_for_lookup(const Value& k) {
    if (value_is_immutable(k)) return k;
    return deep_freeze(k);
}

// Specialized float comparisons must order NaN exactly like value_compare.
inline void check_ordered(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) throw RuntimeError("cannot order nan");
}

[[noreturn]] inline void bad_specialization(const char* opname, const char* want) {
    throw RuntimeError(std::string("specialized opcode ") + opname + " applied to non-" + want +
                       " operand");
}

// d = base[idx]; arrays index by int, tables by any immutable-hashable key.
// A missing table key yields nil.
void do_aget(Value& d, const Value& base, const Value& idx);
void do_aset(const Value& base, const Value& idx, const Value& v);
void do_alen(Value& d, const Value& v);

// id values match the resolver's builtin table.
enum BuiltinId : int32_t {
    kBPut = 0,
    kBPutln = 1,
    kBInt = 2,
    kBFloat = 3,
    kBStr = 4,
    kBLen = 5,
    kBType = 6,
};

// Runs builtin `id` on one argument, writing the result into `d` (which may
// alias `a`). put/putln render onto `out`; `names` resolves fun values.
void call_builtin(int32_t id, Value& d, const Value& a, std::ostream& out,
                  const FunNames* names);

} // namespace dinolite::ops

namespace dinolite::detail {

// Run-start scaffolding shared by both VMs: the global table with argv and
// function bindings preloaded, per-unit constant pools materialized as
// Values, and function names for rendering.
std::vector<Value> prepare_globals(const Program& prog, const std::vector<std::string>& argv);
std::vector<std::vector<Value>> materialize_pools(const Program& prog);
FunNames collect_fun_names(const Program& prog);

ExitReport run_rtl(const Program& prog, const RunOptions& opts, std::ostream& out);
ExitReport run_stack(const Program& prog, const RunOptions& opts, std::ostream& out);

} // namespace dinolite::detail
