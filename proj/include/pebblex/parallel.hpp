#pragma once

#include <cstdint>
#include <thread>
#include <vector>

#include "pebblex/rng.hpp"

namespace pebblex {

/// Count successes of pred(rng, i) for i in [first, first+n).  Each sample's
/// stream is derived from (base, i) alone, and per-worker subtotals are
/// integers, so the count is identical for every worker count and schedule.
template <typename Pred>
std::uint64_t parallel_count(const Rng& base, std::uint64_t first, std::uint64_t n,
                             unsigned workers, Pred&& pred) {
    if (workers == 0) workers = 1;
    if (workers == 1 || n < 2048) {
        std::uint64_t hits = 0;
        for (std::uint64_t i = 0; i < n; ++i) {
            Rng r = base.derive(first + i);
            if (pred(r, first + i)) ++hits;
        }
        return hits;
    }
    std::vector<std::uint64_t> sub(workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::uint64_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::uint64_t lo = w * chunk;
        std::uint64_t hi = lo + chunk < n ? lo + chunk : n;
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            std::uint64_t hits = 0;
            for (std::uint64_t i = lo; i < hi; ++i) {
                Rng r = base.derive(first + i);
                if (pred(r, first + i)) ++hits;
            }
            sub[w] = hits;
        });
    }
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (auto s : sub) total += s;
    return total;
}

} // namespace pebblex
