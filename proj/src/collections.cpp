#include "dinolite/collections.hpp"

#include <algorithm>
#include <bit>

#include "dinolite/hash.hpp"

namespace dinolite {

AssocTable::AssocTable(size_t initial_capacity) {
    size_t cap = std::bit_ceil(std::max(initial_capacity, kMinCapacity));
    slots_.resize(cap);
    states_.assign(cap, State::Empty);
}

size_t AssocTable::find(const Value& key, uint64_t h, size_t* first_free) const {
    size_t idx = size_t(h) & mask();
    size_t step = (size_t(fmix64(h ^ 0x9e3779b97f4a7c15ULL)) & mask()) | 1;
    if (first_free) {
        *first_free = SIZE_MAX;
    }
    for (size_t walked = 0; walked <= mask(); walked++) {
        probes_++;
        switch (states_[idx]) {
        case State::Empty:
            if (first_free && *first_free == SIZE_MAX) {
                *first_free = idx;
            }
            return SIZE_MAX;
        case State::Deleted:
            if (first_free && *first_free == SIZE_MAX) {
                *first_free = idx;
            }
            break;
        case State::Full:
            if (value_equal(slots_[idx].key, key)) {
                return idx;
            }
            break;
        }
        idx = (idx + step) & mask();
    }
    // Full cycle without an empty slot: only possible when every slot is
    // Full or Deleted, which the load limit prevents; first_free still holds
    // a tombstone if any.
    return SIZE_MAX;
}

bool AssocTable::put(const Value& key, const Value& val) {
    if (!value_is_immutable(key)) {
        throw RuntimeError("table keys must be immutable");
    }
    ops_++;
    maybe_grow();
    uint64_t h = hash_value(key);
    size_t first_free = SIZE_MAX;
    size_t hit = find(key, h, &first_free);
    if (hit != SIZE_MAX) {
        slots_[hit].val = val;
        return false;
    }
    if (first_free == SIZE_MAX) {
        // Unreachable while the load limit holds; fail loudly if it ever
        // breaks rather than corrupt memory.
        throw RuntimeError("hash table probe found no free slot");
    }
    if (states_[first_free] == State::Deleted) {
        deleted_--;
    }
    states_[first_free] = State::Full;
    slots_[first_free] = {key, val};
    live_++;
    return true;
}

const Value* AssocTable::get(const Value& key) const {
    ops_++;
    uint64_t h = hash_value(key);
    size_t hit = find(key, h, nullptr);
    return hit == SIZE_MAX ? nullptr : &slots_[hit].val;
}

bool AssocTable::del(const Value& key) {
    ops_++;
    uint64_t h = hash_value(key);
    size_t hit = find(key, h, nullptr);
    if (hit == SIZE_MAX) {
        return false;
    }
    slots_[hit] = {};
    states_[hit] = State::Deleted;
    live_--;
    deleted_++;
    return true;
}

void AssocTable::for_each(const std::function<void(const Value&, const Value&)>& fn) const {
    for (size_t i = 0; i < slots_.size(); i++) {
        if (states_[i] == State::Full) {
            fn(slots_[i].key, slots_[i].val);
        }
    }
}

void AssocTable::maybe_grow() {
    if (double(live_ + deleted_ + 1) <= kMaxLoad * double(slots_.size())) {
        return;
    }
    // Size for the live entries; a tombstone-heavy table shrinks back and a
    // growing table doubles.
    size_t want = std::bit_ceil(std::max(live_ * 2 + 1, kMinCapacity));
    rehash(want);
}

void AssocTable::rehash(size_t new_cap) {
    std::vector<Slot> old_slots = std::move(slots_);
    std::vector<State> old_states = std::move(states_);
    slots_.assign(new_cap, {});
    states_.assign(new_cap, State::Empty);
    live_ = 0;
    deleted_ = 0;
    for (size_t i = 0; i < old_slots.size(); i++) {
        if (old_states[i] != State::Full) {
            continue;
        }
        uint64_t h = hash_value(old_slots[i].key);
        size_t first_free = SIZE_MAX;
        find(old_slots[i].key, h, &first_free);
        states_[first_free] = State::Full;
        slots_[first_free] = std::move(old_slots[i]);
        live_++;
    }
}

} // namespace dinolite
