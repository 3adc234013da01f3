#include "pebblex/multiset_dist.hpp"

#include <cmath>
#include <utility>

#include "pebblex/errors.hpp"
#include "pebblex/parallel.hpp"
#include "pebblex/stats.hpp"

namespace pebblex {

GeometricParams GeometricParams::from_total(double t, long long base_size) {
    if (!(t >= 0.0) || base_size < 1)
        throw PreconditionError("geometric parameters need total >= 0 and base_size >= 1");
    return GeometricParams{1.0 / (1.0 + t / static_cast<double>(base_size))};
}

GeometricParams GeometricParams::from_mean(double alpha) {
    if (!(alpha >= 0.0)) throw PreconditionError("geometric mean must be >= 0");
    return GeometricParams{1.0 / (1.0 + alpha)};
}

long long sample_geometric(const GeometricParams& gp, Rng& rng) {
    if (!(gp.p > 0.0 && gp.p <= 1.0)) throw PreconditionError("geometric p must lie in (0,1]");
    if (gp.p == 1.0) return 0;
    // Inverse CDF: k = floor(log(U) / log(1-p)), U uniform on (0,1).
    double u = rng.next_unit();
    double k = std::floor(std::log(u) / std::log1p(-gp.p));
    if (!(k >= 0.0)) return 0;
    if (k >= 9.0e18) return 9'000'000'000'000'000'000LL;
    return static_cast<long long>(k);
}

void sample_uniform_total_into(PebbleDistribution& out, int n, long long total, Rng& rng) {
    if (n < 1) throw PreconditionError("base size must be >= 1");
    if (total < 0) throw PreconditionError("total must be >= 0");
    out.counts.assign(static_cast<std::size_t>(n), 0);
    long long rem = total;
    for (int i = 0; i + 1 < n; ++i) {
        if (rem == 0) break;
        // Exact marginal of one coordinate among m remaining coordinates and
        // rem remaining pebbles: P(0) = (m-1)/(rem+m-1) and successive ratios
        // P(k+1)/P(k) = (rem-k)/(rem-k+m-2).
        double m = static_cast<double>(n - i);
        double u = rng.next_unit();
        double pk = (m - 1.0) / (static_cast<double>(rem) + m - 1.0);
        double acc = pk;
        long long k = 0;
        while (u > acc && k < rem) {
            double rk = static_cast<double>(rem - k);
            pk *= rk / (rk + m - 2.0);
            acc += pk;
            ++k;
        }
        out.counts[static_cast<std::size_t>(i)] = k;
        rem -= k;
    }
    out.counts[static_cast<std::size_t>(n - 1)] = rem;
}

PebbleDistribution sample_uniform_total(int n, long long total, Rng& rng) {
    PebbleDistribution d;
    sample_uniform_total_into(d, n, total, rng);
    return d;
}

void sample_geometric_product_into(PebbleDistribution& out, int n, double x, Rng& rng) {
    if (n < 1) throw PreconditionError("base size must be >= 1");
    GeometricParams gp = GeometricParams::from_total(x, n);
    out.counts.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.counts[static_cast<std::size_t>(i)] = sample_geometric(gp, rng);
}

PebbleDistribution sample_geometric_product(int n, double x, Rng& rng) {
    PebbleDistribution d;
    sample_geometric_product_into(d, n, x, rng);
    return d;
}

BigInt composition_count(int n, long long total) {
    if (n < 1 || total < 0) throw PreconditionError("composition count needs n >= 1, total >= 0");
    return binomial(total + n - 1, n - 1);
}

void enumerate_compositions(int n, long long total,
                            const std::function<bool(const PebbleDistribution&)>& visit,
                            std::uint64_t cap) {
    BigInt count = composition_count(n, total);
    if (count > BigInt(cap)) throw BudgetError("composition level too large to enumerate");
    PebbleDistribution d;
    d.counts.assign(static_cast<std::size_t>(n), 0);
    d.counts[0] = total;
    for (;;) {
        if (!visit(d)) return;
        // Successor in largest-first lexicographic order: decrement the last
        // positive coordinate before the end, move everything after it onto
        // the next position.
        int j = -1;
        for (int i = n - 2; i >= 0; --i)
            if (d.counts[static_cast<std::size_t>(i)] > 0) { j = i; break; }
        if (j < 0) return;
        long long tail = 0;
        for (int i = j + 1; i < n; ++i) {
            tail += d.counts[static_cast<std::size_t>(i)];
            d.counts[static_cast<std::size_t>(i)] = 0;
        }
        d.counts[static_cast<std::size_t>(j)] -= 1;
        d.counts[static_cast<std::size_t>(j + 1)] = tail + 1;
    }
}

Rational mu_exact(const MonotoneFamily& M, long long total, std::uint64_t cap) {
    if (!M.contains) throw PreconditionError("family has no membership oracle");
    BigInt hits = 0;
    enumerate_compositions(M.base_size, total, [&](const PebbleDistribution& d) {
        if (M.contains(d)) ++hits;
        return true;
    }, cap);
    return Rational(hits, composition_count(M.base_size, total));
}

Estimate nu_estimate(const MonotoneFamily& M, double x, std::uint64_t samples, const Rng& rng,
                     unsigned workers) {
    if (!M.contains) throw PreconditionError("family has no membership oracle");
    std::uint64_t hits = parallel_count(rng, 0, samples, workers, [&](Rng& r, std::uint64_t) {
        thread_local PebbleDistribution buf;
        sample_geometric_product_into(buf, M.base_size, x, r);
        return M.contains(buf);
    });
    WilsonInterval w = wilson_interval(hits, samples, Z_95);
    return Estimate{w.p_hat, w.lo, w.hi, samples};
}

MonotoneFamily solvability_family(Graph g, SolveMethod method) {
    auto shared = std::make_shared<Graph>(std::move(g));
    MonotoneFamily M;
    M.base_size = shared->vertex_count();
    M.excludes_empty = true;
    M.name = "solvable";

    if (method == SolveMethod::Auto) {
        if (shared->bouquet_tag()) method = SolveMethod::Bouquet;
        else if (path_order(*shared)) method = SolveMethod::Path;
        else if (shared->edge_count() == shared->vertex_count() - 1) method = SolveMethod::Tree;
        else method = SolveMethod::BruteForce;
    }
    if (method == SolveMethod::Bouquet && shared->bouquet_tag()) {
        return bouquet_solvability_family(*shared->bouquet_tag());
    }
    if (method == SolveMethod::Path) {
        auto order = path_order(*shared);
        if (!order) throw PreconditionError("graph is not a path");
        bool identity = true;
        for (std::size_t i = 0; i < order->size(); ++i)
            if ((*order)[i] != static_cast<int>(i)) { identity = false; break; }
        if (identity) {
            M.contains = [](const PebbleDistribution& d) { return path_is_solvable(d).solvable; };
        } else {
            auto ord = std::make_shared<std::vector<int>>(std::move(*order));
            M.contains = [ord](const PebbleDistribution& d) {
                thread_local PebbleDistribution along;
                along.counts.resize(d.size());
                for (std::size_t pos = 0; pos < ord->size(); ++pos)
                    along[pos] = d[static_cast<std::size_t>((*ord)[pos])];
                return path_is_solvable(along).solvable;
            };
        }
        return M;
    }
    M.contains = [shared, method](const PebbleDistribution& d) {
        return is_solvable(*shared, d, method).solvable;
    };
    return M;
}

MonotoneFamily bouquet_solvability_family(const BouquetSpec& spec) {
    spec.validate();
    if (spec.n > static_cast<long long>(1) << 31)
        throw PreconditionError("bouquet too large");
    MonotoneFamily M;
    M.base_size = static_cast<int>(spec.n);
    M.excludes_empty = true;
    M.name = "solvable";
    M.contains = [spec](const PebbleDistribution& d) {
        return bouquet_is_solvable(spec, d).solvable;
    };
    return M;
}

} // namespace pebblex
