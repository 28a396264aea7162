#include "dinolite/value.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>

#include "dinolite/collections.hpp"
#include "dinolite/hash.hpp"

namespace dinolite {

const char* tag_name(Tag t) {
    switch (t) {
    case Tag::Nil: return "nil";
    case Tag::Int: return "int";
    case Tag::Float: return "float";
    case Tag::Str: return "str";
    case Tag::Arr: return "arr";
    case Tag::Tab: return "tab";
    case Tag::Fun: return "fun";
    }
    return "?";
}

namespace {

// Tracks aggregate pairs on the current comparison path to catch cycles.
struct PairStack {
    std::vector<std::pair<const void*, const void*>> pairs;

    void push(const void* a, const void* b) {
        for (const auto& [x, y] : pairs) {
            if ((x == a && y == b) || (x == b && y == a)) {
                throw RuntimeError("cannot compare cyclic structures");
            }
        }
        pairs.emplace_back(a, b);
    }
    void pop() { pairs.pop_back(); }
};

bool equal_rec(const Value& a, const Value& b, PairStack& seen);

bool table_equal(const AssocTable& a, const AssocTable& b, PairStack& seen) {
    if (a.size() != b.size()) {
        return false;
    }
    bool all = true;
    a.for_each([&](const Value& k, const Value& v) {
        if (!all) {
            return;
        }
        const Value* other = b.get(k);
        if (!other || !equal_rec(v, *other, seen)) {
            all = false;
        }
    });
    return all;
}

bool equal_rec(const Value& a, const Value& b, PairStack& seen) {
    Tag ta = a.tag(), tb = b.tag();
    if (ta != tb) {
        // Numbers compare across the int/float divide.
        if ((ta == Tag::Int || ta == Tag::Float) && (tb == Tag::Int || tb == Tag::Float)) {
            return a.number() == b.number();
        }
        return false;
    }
    switch (ta) {
    case Tag::Nil:
        return true;
    case Tag::Int:
        return a.as_int() == b.as_int();
    case Tag::Float:
        return a.as_float() == b.as_float();
    case Tag::Str:
        return a.ref_identity() == b.ref_identity() || a.str() == b.str();
    case Tag::Fun:
        return a.fun_id() == b.fun_id();
    case Tag::Arr: {
        if (a.ref_identity() == b.ref_identity()) {
            return true;
        }
        const DynArray& x = *a.arr();
        const DynArray& y = *b.arr();
        if (x.elems.size() != y.elems.size()) {
            return false;
        }
        seen.push(a.ref_identity(), b.ref_identity());
        bool eq = true;
        for (size_t i = 0; eq && i < x.elems.size(); i++) {
            eq = equal_rec(x.elems[i], y.elems[i], seen);
        }
        seen.pop();
        return eq;
    }
    case Tag::Tab: {
        if (a.ref_identity() == b.ref_identity()) {
            return true;
        }
        seen.push(a.ref_identity(), b.ref_identity());
        bool eq = table_equal(*a.tab(), *b.tab(), seen);
        seen.pop();
        return eq;
    }
    }
    return false;
}

} // namespace

bool value_equal(const Value& a, const Value& b) {
    PairStack seen;
    return equal_rec(a, b, seen);
}

int value_compare(const Value& a, const Value& b) {
    Tag ta = a.tag(), tb = b.tag();
    bool na = ta == Tag::Int || ta == Tag::Float;
    bool nb = tb == Tag::Int || tb == Tag::Float;
    if (na && nb) {
        if (ta == Tag::Int && tb == Tag::Int) {
            int64_t x = a.as_int(), y = b.as_int();
            return x < y ? -1 : x > y ? 1 : 0;
        }
        double x = a.number(), y = b.number();
        if (std::isnan(x) || std::isnan(y)) {
            throw RuntimeError("cannot order nan");
        }
        return x < y ? -1 : x > y ? 1 : 0;
    }
    if (ta == Tag::Str && tb == Tag::Str) {
        int c = a.str().compare(b.str());
        return c < 0 ? -1 : c > 0 ? 1 : 0;
    }
    throw RuntimeError(std::string("cannot order ") + tag_name(ta) + " and " + tag_name(tb));
}

bool value_is_immutable(const Value& v) {
    switch (v.tag()) {
    case Tag::Arr:
        return v.arr()->frozen;
    case Tag::Tab:
        return v.tab()->frozen;
    default:
        return true;
    }
}

namespace {

constexpr uint64_t kNilHash = fmix64(0x6e696cULL);

uint64_t hash_rec(const Value& v) {
    switch (v.tag()) {
    case Tag::Nil:
        return kNilHash;
    case Tag::Int:
        return fmix64(uint64_t(v.as_int()));
    case Tag::Float: {
        // An integral float must hash like the equal int.
        double f = v.as_float();
        if (f >= -9223372036854775808.0 && f < 9223372036854775808.0 &&
            double(int64_t(f)) == f) {
            return fmix64(uint64_t(int64_t(f)));
        }
        return fmix64(std::bit_cast<uint64_t>(f));
    }
    case Tag::Str:
        return hash_bytes(v.str().data(), v.str().size(), kStrHashSeed);
    case Tag::Fun:
        return fmix64(0x66756eULL ^ (uint64_t(v.fun_id()) << 24));
    case Tag::Arr: {
        uint64_t h = 0x9e3779b97f4a7c15ULL;
        for (const Value& e : v.arr()->elems) {
            h = fmix64(h ^ hash_rec(e));
        }
        return h;
    }
    case Tag::Tab: {
        // Entry order is irrelevant for table equality, so combine
        // commutatively.
        uint64_t h = uint64_t(v.tab()->size()) * 0xc4ceb9fe1a85ec53ULL;
        v.tab()->for_each([&](const Value& k, const Value& val) {
            h += fmix64(hash_rec(k) ^ (hash_rec(val) * 3));
        });
        return fmix64(h);
    }
    }
    return 0;
}

} // namespace

uint64_t hash_value(const Value& v) {
    if (!value_is_immutable(v)) {
        throw RuntimeError(std::string("cannot hash mutable ") + tag_name(v.tag()));
    }
    return hash_rec(v);
}

Value deep_freeze(const Value& v) {
    switch (v.tag()) {
    case Tag::Arr: {
        auto copy = std::make_shared<DynArray>();
        copy->frozen = true;
        copy->elems.reserve(v.arr()->elems.size());
        for (const Value& e : v.arr()->elems) {
            copy->elems.push_back(deep_freeze(e));
        }
        return Value::make_arr(std::move(copy));
    }
    case Tag::Tab: {
        auto copy = std::make_shared<AssocTable>(v.tab()->size() * 2);
        copy->frozen = true;
        v.tab()->for_each(
            [&](const Value& k, const Value& val) { copy->put(k, deep_freeze(val)); });
        return Value::make_tab(std::move(copy));
    }
    default:
        return v;
    }
}

namespace {

std::string format_float_shortest(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

void quote_into(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        switch (c) {
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        case '\r': out += "\\r"; break;
        case '\\': out += "\\\\"; break;
        case '"': out += "\\\""; break;
        case '\0': out += "\\0"; break;
        default: out += c;
        }
    }
    out += '"';
}

struct RenderCtx {
    const FunNames* names;
    std::vector<const void*> path;

    void enter(const void* p) {
        for (const void* q : path) {
            if (q == p) {
                throw RuntimeError("cannot render cyclic structures");
            }
        }
        path.push_back(p);
    }
    void leave() { path.pop_back(); }
};

void render_rec(const Value& v, std::string& out, RenderCtx& ctx, bool nested) {
    switch (v.tag()) {
    case Tag::Nil:
        out += "nil";
        return;
    case Tag::Int:
        out += std::to_string(v.as_int());
        return;
    case Tag::Float:
        out += format_float_shortest(v.as_float());
        return;
    case Tag::Str:
        if (nested) {
            quote_into(out, v.str());
        } else {
            out += v.str();
        }
        return;
    case Tag::Fun:
        out += "fun ";
        if (ctx.names && v.fun_id() >= 0 && size_t(v.fun_id()) < ctx.names->size()) {
            out += (*ctx.names)[v.fun_id()];
        } else {
            out += "#" + std::to_string(v.fun_id());
        }
        return;
    case Tag::Arr: {
        ctx.enter(v.ref_identity());
        out += '[';
        const DynArray& a = *v.arr();
        for (size_t i = 0; i < a.elems.size(); i++) {
            if (i) {
                out += ", ";
            }
            render_rec(a.elems[i], out, ctx, true);
        }
        out += ']';
        ctx.leave();
        return;
    }
    case Tag::Tab: {
        ctx.enter(v.ref_identity());
        // Deterministic output: entries sorted by rendered key.
        std::vector<std::pair<std::string, std::string>> rows;
        v.tab()->for_each([&](const Value& k, const Value& val) {
            std::string ks, vs;
            render_rec(k, ks, ctx, true);
            render_rec(val, vs, ctx, true);
            rows.emplace_back(std::move(ks), std::move(vs));
        });
        std::sort(rows.begin(), rows.end());
        out += "tab [";
        for (size_t i = 0; i < rows.size(); i++) {
            if (i) {
                out += ", ";
            }
            out += rows[i].first;
            out += " : ";
            out += rows[i].second;
        }
        out += ']';
        ctx.leave();
        return;
    }
    }
}

} // namespace

void render_value(const Value& v, std::string& out, const FunNames* names) {
    RenderCtx ctx{names, {}};
    render_rec(v, out, ctx, false);
}

std::string render_value(const Value& v, const FunNames* names) {
    std::string out;
    render_value(v, out, names);
    return out;
}

} // namespace dinolite
