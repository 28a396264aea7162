#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "dinolite/diag.hpp"

namespace dinolite {

struct DynArray;
class AssocTable;

enum class Tag : uint8_t { Nil, Int, Float, Str, Arr, Tab, Fun };

const char* tag_name(Tag t);

// A dynamically typed value. Scalars live inline; strings and aggregates are
// shared references. Strings are immutable; arrays and tables carry a frozen
// flag set when they become table keys or memo-cache entries.
class Value {
  public:
    Value() : i_(0) {}

    static Value nil() { return Value(); }

    static Value make_int(int64_t v) {
        Value x;
        x.tag_ = Tag::Int;
        x.i_ = v;
        return x;
    }

    static Value make_float(double v) {
        Value x;
        x.tag_ = Tag::Float;
        x.f_ = v;
        return x;
    }

    static Value make_str(std::string s) {
        Value x;
        x.tag_ = Tag::Str;
        x.ref_ = std::make_shared<std::string>(std::move(s));
        return x;
    }

    // Strings are immutable by convention; sharing one buffer across values
    // is safe (and is how the constant pool avoids per-load copies).
    static Value make_str_shared(std::shared_ptr<std::string> s) {
        Value x;
        x.tag_ = Tag::Str;
        x.ref_ = std::move(s);
        return x;
    }

    static Value make_arr(std::shared_ptr<DynArray> a) {
        Value x;
        x.tag_ = Tag::Arr;
        x.ref_ = std::move(a);
        return x;
    }

    static Value make_tab(std::shared_ptr<AssocTable> t) {
        Value x;
        x.tag_ = Tag::Tab;
        x.ref_ = std::move(t);
        return x;
    }

    static Value make_fun(int id) {
        Value x;
        x.tag_ = Tag::Fun;
        x.i_ = id;
        return x;
    }

    Tag tag() const { return tag_; }
    bool is_nil() const { return tag_ == Tag::Nil; }
    bool is_number() const { return tag_ == Tag::Int || tag_ == Tag::Float; }

    int64_t as_int() const { return i_; }
    double as_float() const { return f_; }
    int fun_id() const { return int(i_); }

    // Numeric reading with int promotion; caller must know the tag is
    // Int or Float.
    double number() const { return tag_ == Tag::Int ? double(i_) : f_; }

    const std::string& str() const {
        return *static_cast<const std::string*>(ref_.get());
    }
    std::shared_ptr<std::string> str_ptr() const {
        return std::static_pointer_cast<std::string>(ref_);
    }

    DynArray* arr() const { return static_cast<DynArray*>(ref_.get()); }
    AssocTable* tab() const { return static_cast<AssocTable*>(ref_.get()); }
    const void* ref_identity() const { return ref_.get(); }
    std::shared_ptr<void> ref_shared() const { return ref_; }

    // nil and int 0 are falsy; everything else, including float 0.0, is
    // truthy.
    bool truthy() const {
        if (tag_ == Tag::Nil) return false;
        if (tag_ == Tag::Int) return i_ != 0;
        return true;
    }

    void set_int(int64_t v) {
        tag_ = Tag::Int;
        i_ = v;
        if (ref_) ref_.reset();
    }

    void set_float(double v) {
        tag_ = Tag::Float;
        f_ = v;
        if (ref_) ref_.reset();
    }

    void set_nil() {
        tag_ = Tag::Nil;
        i_ = 0;
        if (ref_) ref_.reset();
    }

  private:
    Tag tag_ = Tag::Nil;
    union {
        int64_t i_;
        double f_;
    };
    std::shared_ptr<void> ref_;
};

struct DynArray {
    std::vector<Value> elems;
    bool frozen = false;
};

// Deep structural equality; ints and floats compare numerically across tags.
// Throws RuntimeError when a cyclic aggregate is compared or when values of
// incomparable kinds meet an ordering operator.
bool value_equal(const Value& a, const Value& b);

// Ordering for <, <=, >, >=: numeric on numbers, lexicographic on strings;
// anything else is a runtime error.
int value_compare(const Value& a, const Value& b);

// Content hash consistent with value_equal: an integral float hashes like
// the equal int. Mutable aggregates are rejected with RuntimeError.
uint64_t hash_value(const Value& v);

// True for values allowed as table keys: scalars, strings, frozen aggregates.
bool value_is_immutable(const Value& v);

// Deep-copies aggregates into frozen ones; scalars and strings pass through.
Value deep_freeze(const Value& v);

// Function names for rendering 'fun' values, indexed by function id.
using FunNames = std::vector<std::string>;

// Renders a value. Top-level strings print raw; strings nested in aggregates
// print quoted with escapes. Table entries print sorted by rendered key.
void render_value(const Value& v, std::string& out, const FunNames* names = nullptr);
std::string render_value(const Value& v, const FunNames* names = nullptr);

} // namespace dinolite
