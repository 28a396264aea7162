#pragma once

#include <cstdint>
#include <vector>

#include "dinolite/cfg.hpp"
#include "dinolite/value.hpp"

namespace dinolite {

// Type facts are tag sets: 0 is bottom (unreachable), a single bit is a known
// tag, multiple bits an uncertain union, kMaskAny the top element. Join is
// bitwise or.
using TypeMask = uint8_t;

constexpr TypeMask mask_of(Tag t) { return static_cast<TypeMask>(1u << static_cast<unsigned>(t)); }
constexpr TypeMask kMaskNil = mask_of(Tag::Nil);
constexpr TypeMask kMaskInt = mask_of(Tag::Int);
constexpr TypeMask kMaskFloat = mask_of(Tag::Float);
constexpr TypeMask kMaskStr = mask_of(Tag::Str);
constexpr TypeMask kMaskArr = mask_of(Tag::Arr);
constexpr TypeMask kMaskTab = mask_of(Tag::Tab);
constexpr TypeMask kMaskFun = mask_of(Tag::Fun);
constexpr TypeMask kMaskAny = 0x7f;
constexpr TypeMask kMaskNum = kMaskInt | kMaskFloat;

constexpr bool mask_single(TypeMask m) { return m != 0 && (m & (m - 1)) == 0; }

// Per-instruction inferred operand types, aligned with the for_each_input
// enumeration (so a dynamic type recorder can be checked against it one
// input at a time).
struct InferResult {
    std::vector<std::vector<TypeMask>> inputs; // [instr][input index]
};

// Forward data-flow over the function's frame slots. Parameters, globals,
// call results and aggregate loads are top; everything else propagates from
// definitions to uses across the block graph.
InferResult infer_types(const BcUnit& unit, const Cfg& cfg);

} // namespace dinolite
