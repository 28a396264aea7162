#include "vm_ops.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <memory>
#include <ostream>
#include <string>

#include "dinolite/collections.hpp"
#include "dinolite/diag.hpp"
#include "dinolite/value.hpp"

namespace dinolite::ops {

void do_aget(Value& d, const Value& base, const Value& idx) {
    switch (base.tag()) {
    case Tag::Arr: {
        DynArray& a = *base.arr();
        if (idx.tag() != Tag::Int)
            throw RuntimeError(std::string("array index must be int, got ") +
                               tag_name(idx.tag()));
        int64_t i = idx.as_int();
        if (i < 0 || static_cast<uint64_t>(i) >= a.elems.size())
            throw RuntimeError("array index " + std::to_string(i) + " out of range (size " +
                               std::to_string(a.elems.size()) + ")");
        d = a.elems[static_cast<size_t>(i)];
        return;
    }
    case Tag::Tab: {
        Value key = key_for_lookup(idx);
        const Value* hit = base.tab()->get(key);
        if (!hit) throw RuntimeError("table key " + render_value(idx) + " not found");
        d = *hit;
        return;
    }
    default:
        throw RuntimeError(std::string("cannot index ") + tag_name(base.tag()));
    }
}

void do_aset(const Value& base, const Value& idx, const Value& v) {
    switch (base.tag()) {
    case Tag::Arr: {
        DynArray& a = *base.arr();
        if (a.frozen) throw RuntimeError("cannot modify immutable array");
        if (idx.tag() != Tag::Int)
            throw RuntimeError(std::string("array index must be int, got ") +
                               tag_name(idx.tag()));
        int64_t i = idx.as_int();
        if (i < 0 || static_cast<uint64_t>(i) >= a.elems.size())
            throw RuntimeError("array index " + std::to_string(i) + " out of range (size " +
                               std::to_string(a.elems.size()) + ")");
        a.elems[static_cast<size_t>(i)] = v;
        return;
    }
    case Tag::Tab: {
        AssocTable& t = *base.tab();
        t.put(key_for_lookup(idx), v);
        return;
    }
    default:
        throw RuntimeError(std::string("cannot index ") + tag_name(base.tag()));
    }
}

void do_alen(Value& d, const Value& v) {
    switch (v.tag()) {
    case Tag::Str:
        d.set_int(static_cast<int64_t>(v.str().size()));
        return;
    case Tag::Arr:
        d.set_int(static_cast<int64_t>(v.arr()->elems.size()));
        return;
    case Tag::Tab:
        d.set_int(static_cast<int64_t>(v.tab()->size()));
        return;
    default:
        throw RuntimeError(std::string("len of ") + tag_name(v.tag()));
    }
}

namespace {

int64_t to_int(const Value& a) {
    switch (a.tag()) {
    case Tag::Int:
        return a.as_int();
    case Tag::Float: {
        double f = a.as_float();
        // Values at or beyond 2^63 (and NaN) have no int64 counterpart.
        if (!(f >= -9223372036854775808.0 && f < 9223372036854775808.0))
            throw RuntimeError("float " + render_value(a) + " out of int range");
        return static_cast<int64_t>(f);
    }
    case Tag::Str: {
        const std::string& s = a.str();
        int64_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw RuntimeError("cannot parse \"" + s + "\" as int");
        return v;
    }
    default:
        throw RuntimeError(std::string("cannot convert ") + tag_name(a.tag()) + " to int");
    }
}

double to_float(const Value& a) {
    switch (a.tag()) {
    case Tag::Int:
        return static_cast<double>(a.as_int());
    case Tag::Float:
        return a.as_float();
    case Tag::Str: {
        const std::string& s = a.str();
        double v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw RuntimeError("cannot parse \"" + s + "\" as float");
        return v;
    }
    default:
        throw RuntimeError(std::string("cannot convert ") + tag_name(a.tag()) + " to float");
    }
}

} // namespace

void call_builtin(int32_t id, Value& d, const Value& a, std::ostream& out,
                  const FunNames* names) {
    switch (id) {
    case kBPut:
        out << render_value(a, names);
        d.set_nil();
        return;
    case kBPutln:
        out << render_value(a, names) << '\n';
        d.set_nil();
        return;
    case kBInt:
        d.set_int(to_int(a));
        return;
    case kBFloat:
        d.set_float(to_float(a));
        return;
    case kBStr:
        d = Value::make_str(render_value(a, names));
        return;
    case kBType:
        d = Value::make_str(tag_name(a.tag()));
        return;
    case kBLen:
        do_alen(d, a);
        return;
    default:
        throw RuntimeError("unknown builtin id " + std::to_string(id));
    }
}

} // namespace dinolite::ops

namespace dinolite::detail {

std::vector<Value> prepare_globals(const Program& prog, const std::vector<std::string>& argv) {
    std::vector<Value> globals(prog.globals.size());
    for (const GlobalDecl& g : prog.globals) {
        if (g.fn >= 0) globals[static_cast<size_t>(g.slot)] = Value::make_fun(g.fn);
    }
    if (!prog.globals.empty() && prog.globals[0].name == "argv") {
        auto arr = std::make_shared<DynArray>();
        arr->elems.reserve(argv.size());
        for (const std::string& s : argv) arr->elems.push_back(Value::make_str(s));
        globals[0] = Value::make_arr(std::move(arr));
    }
    return globals;
}

std::vector<std::vector<Value>> materialize_pools(const Program& prog) {
    std::vector<std::vector<Value>> pools(prog.units.size());
    for (size_t u = 0; u < prog.units.size(); u++) {
        pools[u].reserve(prog.units[u].pool.size());
        for (const PoolConst& c : prog.units[u].pool) {
            pools[u].push_back(c.kind == PoolConst::Kind::Float ? Value::make_float(c.f)
                                                                : Value::make_str(c.s));
        }
    }
    return pools;
}

FunNames collect_fun_names(const Program& prog) {
    FunNames names;
    names.reserve(prog.units.size());
    for (const BcUnit& u : prog.units) names.push_back(u.name);
    return names;
}

} // namespace dinolite::detail
