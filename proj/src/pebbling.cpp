#include "pebblex/pebbling.hpp"

#include <algorithm>
#include <cstring>
#include <deque>
#include <string>
#include <unordered_set>

#include "pebblex/errors.hpp"

namespace pebblex {

namespace {

void check_sizes(const Graph& g, const PebbleDistribution& dist) {
    if (dist.size() != static_cast<std::size_t>(g.vertex_count()))
        throw PreconditionError("distribution length must equal vertex count");
    for (long long c : dist.counts)
        if (c < 0) throw PreconditionError("pebble counts must be nonnegative");
}

struct BruteCtx {
    const Graph& g;
    int target;
    std::uint64_t cap;
    std::uint64_t states = 0;
    std::unordered_set<std::string> seen;

    bool go(std::vector<std::uint32_t>& st) {
        if (st[target] >= 1) return true;
        std::string key(reinterpret_cast<const char*>(st.data()), st.size() * sizeof(std::uint32_t));
        if (!seen.insert(std::move(key)).second) return false;
        if (++states > cap) throw BudgetError("brute-force oracle exceeded state budget");
        for (int u = 0; u < g.vertex_count(); ++u) {
            if (st[u] < 2) continue;
            for (int v : g.neighbors(u)) {
                st[u] -= 2;
                st[v] += 1;
                bool hit = go(st);
                st[v] -= 1;
                st[u] += 2;
                if (hit) return true;
            }
        }
        return false;
    }
};

} // namespace

bool is_pebblable_bruteforce(const Graph& g, const PebbleDistribution& dist, int target,
                             const BruteForceOptions& opts) {
    check_sizes(g, dist);
    if (target < 0 || target >= g.vertex_count())
        throw PreconditionError("target vertex out of range");
    std::vector<std::uint32_t> st(dist.size());
    for (std::size_t i = 0; i < dist.size(); ++i) {
        if (dist[i] > 0xffffffffll)
            throw PreconditionError("brute-force oracle: pebble count too large");
        st[i] = static_cast<std::uint32_t>(dist[i]);
    }
    BruteCtx ctx{g, target, opts.state_cap};
    return ctx.go(st);
}

bool path_vertex_unpebblable(const PebbleDistribution& dist, int i) {
    int n = static_cast<int>(dist.size());
    if (n == 0) throw PreconditionError("empty distribution");
    if (i < 0 || i >= n) throw PreconditionError("target vertex out of range");
    for (long long c : dist.counts)
        if (c < 0) throw PreconditionError("pebble counts must be nonnegative");
    if (dist[i] != 0) return false;
    // left sum: I' = (I + Z) >> 1; the sum is < 1 iff its integer part is 0
    unsigned long long acc = 0;
    for (int j = 0; j < i; ++j) acc = (acc + static_cast<unsigned long long>(dist[j])) >> 1;
    if (acc != 0) return false;
    acc = 0;
    for (int j = n - 1; j > i; --j) acc = (acc + static_cast<unsigned long long>(dist[j])) >> 1;
    return acc == 0;
}

SolvabilityVerdict path_is_solvable(const PebbleDistribution& dist) {
    int n = static_cast<int>(dist.size());
    if (n == 0) throw PreconditionError("empty distribution");
    for (long long c : dist.counts)
        if (c < 0) throw PreconditionError("pebble counts must be nonnegative");
    // right-side integer parts in one backward pass, left side on the fly
    std::vector<unsigned long long> rint(n);
    unsigned long long acc = 0;
    for (int i = n - 1; i >= 0; --i) {
        rint[i] = acc;
        acc = (acc + static_cast<unsigned long long>(dist[i])) >> 1;
    }
    unsigned long long lint = 0;
    for (int i = 0; i < n; ++i) {
        if (dist[i] == 0 && lint == 0 && rint[i] == 0)
            return {false, i};
        lint = (lint + static_cast<unsigned long long>(dist[i])) >> 1;
    }
    return {true, std::nullopt};
}

long long max_deliverable_tree(const Graph& g, const PebbleDistribution& dist, int root) {
    check_sizes(g, dist);
    if (root < 0 || root >= g.vertex_count())
        throw PreconditionError("root vertex out of range");
    if (!g.connected() || g.edge_count() != g.vertex_count() - 1)
        throw PreconditionError("max_deliverable_tree: graph is not a tree");
    int n = g.vertex_count();
    std::vector<int> order, parent(n, -1);
    order.reserve(n);
    order.push_back(root);
    parent[root] = root;
    for (std::size_t h = 0; h < order.size(); ++h) {
        int u = order[h];
        for (int v : g.neighbors(u))
            if (parent[v] < 0) {
                parent[v] = u;
                order.push_back(v);
            }
    }
    std::vector<long long> t(dist.counts.begin(), dist.counts.end());
    for (std::size_t h = order.size(); h-- > 1;) {
        int v = order[h];
        t[parent[v]] += t[v] / 2;
    }
    return t[root];
}

SolvabilityVerdict bouquet_is_solvable(const BouquetSpec& spec, const PebbleDistribution& dist) {
    spec.validate();
    if (dist.size() != static_cast<std::size_t>(spec.n))
        throw PreconditionError("distribution length must equal vertex count");
    for (long long c : dist.counts)
        if (c < 0) throw PreconditionError("pebble counts must be nonnegative");

    const long long g = spec.g, L = spec.L;
    const long long hub = spec.hub_index();
    const long long m = spec.clique_size();
    const long long alen = L - 1;  // vertices per arm

    // clf = floor-halves the non-hub clique vertices can send to any neighbor
    long long clf = 0;
    bool clique_has_empty = false;
    for (long long u = hub + 1; u < spec.n; ++u) {
        clf += dist[u] / 2;
        if (dist[u] == 0) clique_has_empty = true;
    }

    // per arm: b[k] = max pebbles placeable on arm vertex k from the free-end side
    std::vector<long long> arm_to_hub(static_cast<std::size_t>(g), 0);
    std::vector<long long> b(alen > 0 ? static_cast<std::size_t>(alen) : 1);
    long long arm_to_hub_sum = 0;
    std::vector<std::vector<long long>> below(static_cast<std::size_t>(g));
    for (long long a = 0; a < g && alen > 0; ++a) {
        long long base = a * alen;
        long long acc = 0;
        below[a].resize(alen);
        for (long long k = 0; k < alen; ++k) {
            acc = dist[base + k] + acc / 2;
            below[a][k] = acc;
        }
        arm_to_hub[a] = acc / 2;
        arm_to_hub_sum += arm_to_hub[a];
    }

    long long hubside = dist[hub] + arm_to_hub_sum;  // hub pile plus arm deliveries
    long long hub_deliverable = hubside + clf;

    // arm targets, in vertex order
    std::vector<long long> down(alen > 0 ? static_cast<std::size_t>(alen) + 1 : 1);
    for (long long a = 0; a < g && alen > 0; ++a) {
        long long base = a * alen;
        long long H = dist[hub] + (arm_to_hub_sum - arm_to_hub[a]) + clf;
        down[alen] = H;  // slot alen stands for the hub
        for (long long k = alen - 1; k >= 0; --k) down[k] = dist[base + k] + down[k + 1] / 2;
        for (long long k = 0; k < alen; ++k) {
            long long from_below = k > 0 ? below[a][k - 1] / 2 : 0;
            long long got = dist[base + k] + from_below + down[k + 1] / 2;
            if (got < 1) return {false, static_cast<int>(base + k)};
        }
    }

    if (hub_deliverable < 1) return {false, static_cast<int>(hub)};

    if (m > 1 && clique_has_empty && clf + hubside / 2 == 0) {
        for (long long u = hub + 1; u < spec.n; ++u)
            if (dist[u] == 0) return {false, static_cast<int>(u)};
    }
    return {true, std::nullopt};
}

std::optional<std::vector<int>> path_order(const Graph& g) {
    int n = g.vertex_count();
    if (n == 1) return std::vector<int>{0};
    if (!g.connected() || g.edge_count() != n - 1) return std::nullopt;
    int end = -1;
    for (int v = 0; v < n; ++v) {
        std::size_t deg = g.neighbors(v).size();
        if (deg > 2) return std::nullopt;
        if (deg == 1 && end < 0) end = v;
    }
    std::vector<int> order;
    order.reserve(n);
    int prev = -1, cur = end;
    while (static_cast<int>(order.size()) < n) {
        order.push_back(cur);
        int next = -1;
        for (int w : g.neighbors(cur))
            if (w != prev) next = w;
        prev = cur;
        if (next < 0) break;
        cur = next;
    }
    if (static_cast<int>(order.size()) != n) return std::nullopt;
    return order;
}

SolvabilityVerdict is_solvable(const Graph& g, const PebbleDistribution& dist, SolveMethod method,
                               const BruteForceOptions& opts) {
    check_sizes(g, dist);
    if (!g.connected()) throw PreconditionError("is_solvable: graph must be connected");

    if (method == SolveMethod::Auto) {
        if (g.bouquet_tag())
            method = SolveMethod::Bouquet;
        else if (path_order(g))
            method = SolveMethod::Path;
        else if (g.edge_count() == g.vertex_count() - 1)
            method = SolveMethod::Tree;
        else
            method = SolveMethod::BruteForce;
    }

    switch (method) {
        case SolveMethod::Bouquet: {
            if (!g.bouquet_tag())
                throw PreconditionError("is_solvable: graph carries no bouquet shape");
            return bouquet_is_solvable(*g.bouquet_tag(), dist);
        }
        case SolveMethod::Path: {
            auto order = path_order(g);
            if (!order) throw PreconditionError("is_solvable: graph is not a path");
            PebbleDistribution along = PebbleDistribution::zeros(dist.size());
            for (std::size_t pos = 0; pos < order->size(); ++pos)
                along[pos] = dist[(*order)[pos]];
            SolvabilityVerdict v = path_is_solvable(along);
            if (v.witness_unpebblable)
                v.witness_unpebblable = (*order)[*v.witness_unpebblable];
            return v;
        }
        case SolveMethod::Tree: {
            for (int root = 0; root < g.vertex_count(); ++root)
                if (max_deliverable_tree(g, dist, root) < 1) return {false, root};
            return {true, std::nullopt};
        }
        case SolveMethod::BruteForce:
        default: {
            for (int t = 0; t < g.vertex_count(); ++t)
                if (!is_pebblable_bruteforce(g, dist, t, opts)) return {false, t};
            return {true, std::nullopt};
        }
    }
}

Rational weight_potential(const Graph& g, const PebbleDistribution& dist, int v) {
    check_sizes(g, dist);
    std::vector<int> d = g.distances_from(v);
    Rational q = 0;
    for (std::size_t x = 0; x < dist.size(); ++x) {
        if (dist[x] == 0) continue;
        BigInt denom = BigInt(1) << d[x];
        q += Rational(BigInt(dist[x]), denom);
    }
    return q;
}

} // namespace pebblex
