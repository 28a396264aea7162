#include <doctest.h>

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dinolite/collections.hpp"
#include "dinolite/diag.hpp"
#include "dinolite/hash.hpp"
#include "dinolite/value.hpp"

using namespace dinolite;

namespace {

Value int_array(std::initializer_list<int64_t> xs) {
    auto arr = std::make_shared<DynArray>();
    for (int64_t x : xs) arr->elems.push_back(Value::make_int(x));
    return Value::make_arr(std::move(arr));
}

// Mirrors the probe-step derivation in AssocTable::find.
size_t probe_step(uint64_t h, size_t capacity) {
    return (size_t(fmix64(h ^ 0x9e3779b97f4a7c15ULL)) & (capacity - 1)) | 1;
}

// A deterministic pool of keys mixing every immutable tag.
std::vector<Value> make_key_pool(std::mt19937_64& rng, size_t n) {
    std::vector<Value> keys;
    keys.reserve(n);
    for (size_t i = 0; i < n; i++) {
        switch (rng() % 4) {
        case 0: keys.push_back(Value::make_int(int64_t(rng() % 4096))); break;
        case 1: keys.push_back(Value::make_float(double(rng() % 512) * 0.25)); break;
        case 2: keys.push_back(Value::make_str("k" + std::to_string(rng() % 2048))); break;
        default: keys.push_back(Value()); break; // nil is a valid key
        }
    }
    return keys;
}

// Order keys for the reference map via the renderer, collapsing integral
// floats onto the equal int: the table keys by == and 2 == 2.0.
std::string model_key(const Value& v) {
    if (v.tag() == Tag::Float) {
        double f = v.as_float();
        if (f >= -9223372036854775808.0 && f < 9223372036854775808.0 &&
            double(int64_t(f)) == f)
            return "int|" + std::to_string(int64_t(f));
    }
    return std::string(tag_name(v.tag())) + "|" + render_value(v);
}

} // namespace

TEST_CASE("probe sequence covers every slot at capacity 16") {
    constexpr size_t kCap = 16;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 64; trial++) {
        uint64_t h = rng();
        size_t step = probe_step(h, kCap);
        CHECK((step & 1) == 1);
        std::set<size_t> seen;
        size_t idx = size_t(h) & (kCap - 1);
        for (size_t i = 0; i < kCap; i++) {
            seen.insert(idx);
            idx = (idx + step) & (kCap - 1);
        }
        CHECK(seen.size() == kCap);
    }
}

TEST_CASE("a capacity-16 table keeps every entry reachable while filling") {
    AssocTable t(16);
    for (int i = 0; i < 64; i++) {
        t.put(Value::make_int(i), Value::make_int(i * i));
        CHECK(double(t.size() + t.tombstones()) <= AssocTable::kMaxLoad * double(t.capacity()));
        for (int j = 0; j <= i; j++) {
            const Value* hit = t.get(Value::make_int(j));
            REQUIRE(hit != nullptr);
            CHECK(hit->as_int() == int64_t(j) * j);
        }
    }
}

TEST_CASE("randomized put/get/del matches a reference model") {
    std::mt19937_64 rng(20260815);
    std::vector<Value> keys = make_key_pool(rng, 512);
    AssocTable t;
    std::map<std::string, int64_t> model;

    for (int op = 0; op < 100000; op++) {
        const Value& key = keys[rng() % keys.size()];
        std::string mkey = model_key(key);
        switch (rng() % 3) {
        case 0: {
            int64_t v = int64_t(rng() % 100000);
            bool fresh = t.put(key, Value::make_int(v));
            CHECK(fresh == (model.find(mkey) == model.end()));
            model[mkey] = v;
            break;
        }
        case 1: {
            const Value* hit = t.get(key);
            auto mit = model.find(mkey);
            if (mit == model.end()) {
                CHECK(hit == nullptr);
            } else {
                REQUIRE(hit != nullptr);
                CHECK(hit->as_int() == mit->second);
            }
            break;
        }
        default: {
            bool existed = t.del(key);
            CHECK(existed == (model.erase(mkey) > 0));
            break;
        }
        }
        REQUIRE(t.size() == model.size());
        // live + tombstones never drift past the rehash bound
        CHECK(double(t.size() + t.tombstones()) <= AssocTable::kMaxLoad * double(t.capacity()));
    }

    // final state: every model entry retrievable, nothing extra
    size_t verified = 0;
    t.for_each([&](const Value& k, const Value& val) {
        auto mit = model.find(model_key(k));
        REQUIRE(mit != model.end());
        CHECK(val.as_int() == mit->second);
        verified++;
    });
    CHECK(verified == model.size());
}

TEST_CASE("deleting everything leaves capacity for the next rehash to reclaim") {
    AssocTable t;
    for (int i = 0; i < 1000; i++) t.put(Value::make_int(i), Value());
    size_t cap_full = t.capacity();
    for (int i = 0; i < 1000; i++) t.del(Value::make_int(i));
    CHECK(t.size() == 0);
    CHECK(t.capacity() == cap_full); // no eager shrink
    // churn forces a rehash eventually; capacity may then drop
    for (int i = 0; i < 5000; i++) {
        t.put(Value::make_int(i), Value());
        t.del(Value::make_int(i));
    }
    CHECK(t.size() == 0);
    CHECK(t.capacity() >= AssocTable::kMinCapacity);
}

TEST_CASE("lookup probe lengths stay short at half load") {
    AssocTable t(2048);
    for (int i = 0; i < 1024; i++) t.put(Value::make_int(i * 7919), Value::make_int(i));
    uint64_t probes0 = t.probe_count();
    uint64_t ops0 = t.op_count();
    for (int i = 0; i < 1024; i++) CHECK(t.get(Value::make_int(i * 7919)) != nullptr);
    double mean = double(t.probe_count() - probes0) / double(t.op_count() - ops0);
    CHECK(mean < 1.6);
}

TEST_CASE("mutable keys are rejected and frozen keys work") {
    AssocTable t;
    Value arr = int_array({1, 2});
    CHECK_THROWS_AS(t.put(arr, Value::make_int(1)), RuntimeError);
    Value frozen = deep_freeze(arr);
    t.put(frozen, Value::make_int(9));
    const Value* hit = t.get(deep_freeze(int_array({1, 2})));
    REQUIRE(hit != nullptr);
    CHECK(hit->as_int() == 9);
}
