#pragma once

#include <deque>
#include <vector>

#include "dinolite/cfg.hpp"

namespace dinolite {

// Forward worklist solver. `in` holds the entry state of every block and must
// be preseeded (entry block state plus the bottom element elsewhere).
// transfer(block_id, state) mutates state across the block; join(dst, src)
// merges src into dst and reports whether dst changed.
template <typename State, typename Transfer, typename Join>
void solve_forward(const Cfg& cfg, std::vector<State>& in, Transfer&& transfer, Join&& join) {
    std::deque<int> work;
    std::vector<bool> queued(cfg.blocks.size(), false);
    for (size_t b = 0; b < cfg.blocks.size(); b++) {
        work.push_back(static_cast<int>(b));
        queued[b] = true;
    }
    while (!work.empty()) {
        int b = work.front();
        work.pop_front();
        queued[static_cast<size_t>(b)] = false;
        State out = in[static_cast<size_t>(b)];
        transfer(b, out);
        for (int s : cfg.blocks[static_cast<size_t>(b)].succs) {
            if (join(in[static_cast<size_t>(s)], out) && !queued[static_cast<size_t>(s)]) {
                work.push_back(s);
                queued[static_cast<size_t>(s)] = true;
            }
        }
    }
}

// Frame slots that some path may read before writing (params excluded: the
// call sequence writes them). Used to decide which locals an inlined body
// must explicitly clear to keep fresh-frame semantics.
std::vector<bool> read_before_write_slots(const BcUnit& unit, const Cfg& cfg);

} // namespace dinolite
