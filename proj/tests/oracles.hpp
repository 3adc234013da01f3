#pragma once
// Reference implementations for tests only.  Deliberately naive and written
// against the public types, so they share no logic with the code under test.

#include <cstdint>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pebblex/graphs.hpp"
#include "pebblex/pebbling.hpp"
#include "pebblex/rng.hpp"

namespace oracle {

// all-pairs shortest paths, cubic
inline std::vector<std::vector<int>> floyd_warshall(const pebblex::Graph& g) {
    int n = g.vertex_count();
    const int inf = 1 << 28;
    std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
    for (int i = 0; i < n; ++i) d[i][i] = 0;
    for (int u = 0; u < n; ++u)
        for (int v : g.neighbors(u)) d[u][v] = 1;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
    return d;
}

// decode a Pruefer sequence into a labeled tree on n vertices
inline std::vector<std::pair<int, int>> prufer_decode(const std::vector<int>& seq) {
    int n = static_cast<int>(seq.size()) + 2;
    std::vector<int> degree(n, 1);
    for (int v : seq) ++degree[v];
    std::vector<std::pair<int, int>> edges;
    for (int v : seq) {
        for (int leaf = 0; leaf < n; ++leaf)
            if (degree[leaf] == 1) {
                edges.emplace_back(leaf, v);
                --degree[leaf];
                --degree[v];
                break;
            }
    }
    int a = -1;
    for (int v = 0; v < n; ++v)
        if (degree[v] == 1) {
            if (a < 0)
                a = v;
            else
                edges.emplace_back(a, v);
        }
    return edges;
}

// every labeled tree on n vertices, n^(n-2) of them
inline std::vector<std::vector<std::pair<int, int>>> all_trees(int n) {
    std::vector<std::vector<std::pair<int, int>>> out;
    if (n == 1) {
        out.push_back({});
        return out;
    }
    if (n == 2) {
        out.push_back({{0, 1}});
        return out;
    }
    std::vector<int> seq(n - 2, 0);
    for (;;) {
        out.push_back(prufer_decode(seq));
        int i = n - 3;
        while (i >= 0 && seq[i] == n - 1) seq[i--] = 0;
        if (i < 0) break;
        ++seq[i];
    }
    return out;
}

inline std::vector<std::pair<int, int>> random_tree(int n, pebblex::Rng& rng) {
    if (n <= 2) return n == 2 ? std::vector<std::pair<int, int>>{{0, 1}}
                              : std::vector<std::pair<int, int>>{};
    std::vector<int> seq(n - 2);
    for (int& v : seq) v = static_cast<int>(rng.next_below(n));
    return prufer_decode(seq);
}

// Breadth-first closure over entire move sequences.  Records which vertices
// ever carry a pebble in any reachable configuration; the distribution is
// solvable exactly when all of them do.
struct Closure {
    std::vector<char> pebblable;
    bool solvable = false;
    std::uint64_t states = 0;

    Closure(const pebblex::Graph& g, const pebblex::PebbleDistribution& start,
            std::size_t cap = 4'000'000) {
        int n = g.vertex_count();
        pebblable.assign(n, 0);
        int marked = 0;
        auto mark = [&](const std::vector<long long>& c) {
            for (int i = 0; i < n; ++i)
                if (c[i] > 0 && !pebblable[i]) {
                    pebblable[i] = 1;
                    ++marked;
                }
        };
        auto key = [n](const std::vector<long long>& c) {
            std::string k(n, '\0');
            for (int i = 0; i < n; ++i) k[i] = static_cast<char>(c[i]);
            return k;
        };
        for (long long v : start.counts)
            if (v < 0 || v > 127) throw std::invalid_argument("closure oracle: count out of range");
        std::unordered_set<std::string> seen;
        std::deque<std::vector<long long>> queue;
        seen.insert(key(start.counts));
        queue.push_back(start.counts);
        mark(start.counts);
        while (!queue.empty() && marked < n) {
            std::vector<long long> cur = std::move(queue.front());
            queue.pop_front();
            ++states;
            if (states > cap) throw std::runtime_error("closure oracle: state cap exceeded");
            for (int u = 0; u < n; ++u) {
                if (cur[u] < 2) continue;
                for (int w : g.neighbors(u)) {
                    cur[u] -= 2;
                    cur[w] += 1;
                    if (seen.insert(key(cur)).second) {
                        mark(cur);
                        queue.push_back(cur);
                    }
                    cur[w] -= 1;
                    cur[u] += 2;
                }
            }
        }
        solvable = marked == n;
    }
};

} // namespace oracle
