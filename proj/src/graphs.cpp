#include "pebblex/graphs.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "pebblex/errors.hpp"

namespace pebblex {

void BouquetSpec::validate() const {
    if (n < 1) throw PreconditionError("bouquet: need n >= 1");
    if (g < 0) throw PreconditionError("bouquet: need g >= 0");
    if (L < 1) throw PreconditionError("bouquet: need L >= 1");
    if (g * (L - 1) + 1 > n)
        throw PreconditionError("bouquet: arms need g*(L-1)+1 <= n, got n=" + std::to_string(n) +
                                " g=" + std::to_string(g) + " L=" + std::to_string(L));
}

Graph::Graph(int n, const std::vector<std::pair<int, int>>& edges, std::size_t distance_cache_cap)
    : n_(n), cache_cap_(distance_cache_cap), cache_(std::make_shared<DistCache>()) {
    if (n <= 0) throw PreconditionError("graph: need at least one vertex");
    adj_.resize(n_);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= n_ || v < 0 || v >= n_)
            throw PreconditionError("graph: edge endpoint out of range");
        if (u == v) throw PreconditionError("graph: self-loop on vertex " + std::to_string(u));
        adj_[u].push_back(v);
        adj_[v].push_back(u);
    }
    for (auto& nb : adj_) {
        std::sort(nb.begin(), nb.end());
        nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
        edge_count_ += static_cast<long long>(nb.size());
    }
    edge_count_ /= 2;
    // connectivity from vertex 0
    std::vector<int> d = bfs(0);
    connected_ = std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

void Graph::check_vertex(int v) const {
    if (v < 0 || v >= n_)
        throw PreconditionError("graph: vertex " + std::to_string(v) + " out of range");
}

const std::vector<int>& Graph::neighbors(int v) const {
    check_vertex(v);
    return adj_[v];
}

std::vector<int> Graph::bfs(int v) const {
    std::vector<int> dist(n_, -1);
    std::deque<int> q;
    dist[v] = 0;
    q.push_back(v);
    while (!q.empty()) {
        int u = q.front();
        q.pop_front();
        for (int w : adj_[u])
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                q.push_back(w);
            }
    }
    return dist;
}

std::vector<int> Graph::distances_from(int v) const {
    check_vertex(v);
    std::vector<int> d = bfs(v);
    for (int i = 0; i < n_; ++i)
        if (d[i] < 0)
            throw PreconditionError("graph: vertex " + std::to_string(i) +
                                    " unreachable from " + std::to_string(v));
    return d;
}

int Graph::distance(int u, int v) const {
    check_vertex(u);
    check_vertex(v);
    if (static_cast<std::size_t>(n_) <= cache_cap_) {
        std::call_once(cache_->once, [this] {
            cache_->d.resize(n_);
            for (int s = 0; s < n_; ++s) cache_->d[s] = bfs(s);
        });
        int d = cache_->d[u][v];
        if (d < 0)
            throw PreconditionError("graph: vertex " + std::to_string(v) +
                                    " unreachable from " + std::to_string(u));
        return d;
    }
    int d = bfs(u)[v];
    if (d < 0)
        throw PreconditionError("graph: vertex " + std::to_string(v) +
                                " unreachable from " + std::to_string(u));
    return d;
}

int Graph::eccentricity(int v) const {
    std::vector<int> d = distances_from(v);
    return *std::max_element(d.begin(), d.end());
}

Graph make_path(long long n) {
    if (n < 1 || n > (1ll << 30)) throw PreconditionError("path: need 1 <= n <= 2^30");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n - 1);
    for (long long i = 0; i + 1 < n; ++i)
        edges.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
    return Graph(static_cast<int>(n), edges);
}

Graph make_clique(long long n) {
    return make_bouquet(BouquetSpec{n, 0, 1});
}

Graph make_bouquet(const BouquetSpec& spec) {
    spec.validate();
    if (spec.n > (1ll << 30)) throw PreconditionError("bouquet: need n <= 2^30");
    // labels: arm a gets a*(L-1)..a*(L-1)+L-2 from free end toward the hub,
    // then the hub at g*(L-1), then the remaining clique vertices
    long long n = spec.n, g = spec.g, L = spec.L;
    int hub = static_cast<int>(spec.hub_index());
    std::vector<std::pair<int, int>> edges;
    for (long long a = 0; a < g && L > 1; ++a) {
        int base = static_cast<int>(a * (L - 1));
        for (long long j = 0; j + 2 < L; ++j)
            edges.emplace_back(base + static_cast<int>(j), base + static_cast<int>(j) + 1);
        edges.emplace_back(base + static_cast<int>(L) - 2, hub);
    }
    long long m = spec.clique_size();
    std::vector<int> clique;
    clique.push_back(hub);
    for (long long i = 1; i < m; ++i) clique.push_back(hub + static_cast<int>(i));
    for (std::size_t i = 0; i < clique.size(); ++i)
        for (std::size_t j = i + 1; j < clique.size(); ++j)
            edges.emplace_back(clique[i], clique[j]);
    Graph gr(static_cast<int>(n), edges);
    gr.tag_ = spec;
    return gr;
}

Graph read_edge_list(std::istream& in) {
    std::vector<std::pair<int, int>> edges;
    long long u, v, maxv = -1;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        if (line.empty() || line[0] == '#') continue;
        if (!(ls >> u >> v)) throw PreconditionError("edge list: malformed line: " + line);
        if (u < 0 || v < 0 || u > (1 << 30) || v > (1 << 30))
            throw PreconditionError("edge list: vertex id out of range");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
        maxv = std::max({maxv, u, v});
    }
    if (maxv < 0) throw PreconditionError("edge list: no edges");
    return Graph(static_cast<int>(maxv) + 1, edges);
}

Graph parse_graph(const std::string& literal) {
    auto parse_tail = [&](std::size_t pos, int want) {
        std::vector<long long> vals;
        std::string rest = literal.substr(pos);
        std::istringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ':')) {
            try {
                vals.push_back(std::stoll(tok));
            } catch (...) {
                throw PreconditionError("graph literal: bad number in '" + literal + "'");
            }
        }
        if (static_cast<int>(vals.size()) != want)
            throw PreconditionError("graph literal: wrong arity in '" + literal + "'");
        return vals;
    };
    if (literal.rfind("path:", 0) == 0) return make_path(parse_tail(5, 1)[0]);
    if (literal.rfind("clique:", 0) == 0) return make_clique(parse_tail(7, 1)[0]);
    if (literal.rfind("bouquet:", 0) == 0) {
        auto v = parse_tail(8, 3);
        return make_bouquet(BouquetSpec{v[0], v[1], v[2]});
    }
    std::ifstream f(literal);
    if (!f) throw PreconditionError("graph: cannot open '" + literal + "'");
    return read_edge_list(f);
}

} // namespace pebblex
