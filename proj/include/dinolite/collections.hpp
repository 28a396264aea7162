#pragma once

#include <functional>

#include "dinolite/value.hpp"

namespace dinolite {

// Open-addressed hash table with secondary hashing: the probe step is derived
// from a second hash of the key and forced odd, so with power-of-two capacity
// every probe sequence visits all slots. Deletion uses tombstones; insertion
// reuses the first tombstone on the probe path. A rehash triggers when live
// plus deleted slots exceed 70% of capacity.
class AssocTable {
  public:
    static constexpr size_t kMinCapacity = 8;
    static constexpr double kMaxLoad = 0.70;

    // `initial_capacity` rounds up to a power of two; mainly for probing
    // tests that want a fixed small table.
    explicit AssocTable(size_t initial_capacity = kMinCapacity);

    // Inserts or overwrites. The key must satisfy value_is_immutable (the VM
    // deep-freezes guest keys before calling). Returns true when a new entry
    // was created.
    bool put(const Value& key, const Value& val);

    // Returns the stored value or nullptr.
    const Value* get(const Value& key) const;

    // Removes an entry, leaving a tombstone. Returns true when it existed.
    bool del(const Value& key);

    size_t size() const { return live_; }
    size_t capacity() const { return slots_.size(); }
    size_t tombstones() const { return deleted_; }

    void for_each(const std::function<void(const Value&, const Value&)>& fn) const;

    // Cumulative slot inspections and lookup operations, for probe-length
    // statistics in tests.
    uint64_t probe_count() const { return probes_; }
    uint64_t op_count() const { return ops_; }

    bool frozen = false;

  private:
    enum class State : uint8_t { Empty, Full, Deleted };

    struct Slot {
        Value key;
        Value val;
    };

    size_t mask() const { return slots_.size() - 1; }
    void maybe_grow();
    void rehash(size_t new_cap);

    // Probe loop core: returns the slot holding `key`, or SIZE_MAX plus the
    // first reusable slot for inserts.
    size_t find(const Value& key, uint64_t h, size_t* first_free) const;

    std::vector<Slot> slots_;
    std::vector<State> states_;
    size_t live_ = 0;
    size_t deleted_ = 0;
    mutable uint64_t probes_ = 0;
    mutable uint64_t ops_ = 0;
};

} // namespace dinolite
