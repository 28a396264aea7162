#pragma once

#include <cstddef>
#include <cstdint>

namespace dinolite {

// 64-bit finalizer used to decorrelate hash values and derive probe steps.
constexpr uint64_t fmix64(uint64_t h) {
    h ^= h >> 33;
    h *= 0xff51afd7ed558ccdULL;
    h ^= h >> 33;
    h *= 0xc4ceb9fe1a85ec53ULL;
    h ^= h >> 33;
    return h;
}

// MurmurHash64A over a byte range.
uint64_t hash_bytes(const void* data, size_t len, uint64_t seed);

// Seed for string hashing; fixed so hashes are stable across runs.
constexpr uint64_t kStrHashSeed = 0x8b72e19fULL;

} // namespace dinolite
