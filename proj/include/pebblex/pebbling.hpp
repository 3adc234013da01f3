#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pebblex/graphs.hpp"
#include "pebblex/rational.hpp"

namespace pebblex {

/// Pebble counts per vertex, indexed like the graph.
struct PebbleDistribution {
    std::vector<long long> counts;

    PebbleDistribution() = default;
    explicit PebbleDistribution(std::vector<long long> c) : counts(std::move(c)) {}

    // Named instead of a size_t constructor: PebbleDistribution({3}) must mean
    // one pile of 3, not 3 empty slots.
    static PebbleDistribution zeros(std::size_t n) {
        PebbleDistribution d;
        d.counts.assign(n, 0);
        return d;
    }

    std::size_t size() const { return counts.size(); }
    long long& operator[](std::size_t i) { return counts[i]; }
    long long operator[](std::size_t i) const { return counts[i]; }
    long long total() const {
        long long t = 0;
        for (long long c : counts) t += c;
        return t;
    }
};

struct SolvabilityVerdict {
    bool solvable = false;
    std::optional<int> witness_unpebblable;  // set iff unsolvable
};

enum class SolveMethod { Auto, BruteForce, Path, Tree, Bouquet };

struct BruteForceOptions {
    std::uint64_t state_cap = 10'000'000;  // visited-state budget; BudgetError past it
};

/// Exhaustive reachability over pebbling moves (remove 2 at u, add 1 at a
/// neighbor).  Ground truth for the closed-form solvers; memoized per call.
bool is_pebblable_bruteforce(const Graph& g, const PebbleDistribution& dist, int target,
                             const BruteForceOptions& opts = {});

/// Every-vertex reachability.  Auto picks the fastest exact solver the shape
/// admits: bouquet tag, then path, then tree, then brute force.
SolvabilityVerdict is_solvable(const Graph& g, const PebbleDistribution& dist,
                               SolveMethod method = SolveMethod::Auto,
                               const BruteForceOptions& opts = {});

/// Max pebbles placeable on root of a tree: t(v) = Z(v) + sum floor(t(child)/2).
long long max_deliverable_tree(const Graph& g, const PebbleDistribution& dist, int root);

/// Path vertices in index order.  Vertex i is unpebblable iff it holds no
/// pebble and both one-sided weighted sums  sum_j Z(j) 2^{-|i-j|}  are < 1.
/// The comparison is exact: the integer part of the running sum obeys
/// I' = (I + Z) >> 1 and the fractional part can never reach 1.
bool path_vertex_unpebblable(const PebbleDistribution& dist, int i);
SolvabilityVerdict path_is_solvable(const PebbleDistribution& dist);

/// Exact bouquet verdict in O(n): greedy chain transport along each arm plus
/// floor-halving into and out of the hub and clique.
SolvabilityVerdict bouquet_is_solvable(const BouquetSpec& spec, const PebbleDistribution& dist);

/// Q = sum_x Z(x) 2^{-d(x,v)}, exact.  Q < 1 implies v is unpebblable.
Rational weight_potential(const Graph& g, const PebbleDistribution& dist, int v);

/// Traversal order if the graph is a path, nullopt otherwise.
std::optional<std::vector<int>> path_order(const Graph& g);

} // namespace pebblex
