#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pebblex {

/// g arm paths of L vertices each, sharing one end with a clique on
/// n - g*(L-1) vertices (the shared vertex is the hub).  L = 1 degenerates to
/// a clique, clique size 1 to a disjoint union of arms glued at the hub.
struct BouquetSpec {
    long long n = 1;
    long long g = 0;
    long long L = 1;

    long long clique_size() const { return n - g * (L - 1); }
    long long hub_index() const { return g * (L - 1); }
    void validate() const;
};

/// Immutable simple undirected graph on dense vertex ids 0..n-1.
/// Safe to share across threads; the all-pairs distance cache is built once
/// under a lock and only for n <= distance_cache_cap.
class Graph {
  public:
    Graph(int n, const std::vector<std::pair<int, int>>& edges,
          std::size_t distance_cache_cap = 4096);

    int vertex_count() const { return n_; }
    long long edge_count() const { return edge_count_; }
    const std::vector<int>& neighbors(int v) const;
    bool connected() const { return connected_; }

    /// BFS distances from v; throws naming the first unreachable vertex.
    std::vector<int> distances_from(int v) const;
    int distance(int u, int v) const;
    int eccentricity(int v) const;

    /// Set when the graph was built by make_bouquet; lets solvers dispatch.
    const std::optional<BouquetSpec>& bouquet_tag() const { return tag_; }

  private:
    friend Graph make_bouquet(const BouquetSpec&);

    void check_vertex(int v) const;
    std::vector<int> bfs(int v) const;

    int n_;
    long long edge_count_ = 0;
    bool connected_ = false;
    std::vector<std::vector<int>> adj_;
    std::optional<BouquetSpec> tag_;
    std::size_t cache_cap_;

    struct DistCache {
        std::once_flag once;
        std::vector<std::vector<int>> d;
    };
    std::shared_ptr<DistCache> cache_;
};

Graph make_path(long long n);
Graph make_clique(long long n);
Graph make_bouquet(const BouquetSpec& spec);

/// "path:<n>", "clique:<n>", "bouquet:<n>:<g>:<L>", or a filename of
/// whitespace-separated 0-based edge pairs.
Graph parse_graph(const std::string& literal);
Graph read_edge_list(std::istream& in);

} // namespace pebblex
