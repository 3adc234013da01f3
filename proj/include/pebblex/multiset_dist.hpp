#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "pebblex/graphs.hpp"
#include "pebblex/pebbling.hpp"
#include "pebblex/rational.hpp"
#include "pebblex/rng.hpp"

namespace pebblex {

/// Per-coordinate geometric law P(k) = p(1-p)^k with mean alpha = 1/p - 1.
struct GeometricParams {
    double p = 1.0;

    double alpha() const { return 1.0 / p - 1.0; }
    /// Parameter such that the expected total over base_size coordinates is t.
    static GeometricParams from_total(double t, long long base_size);
    static GeometricParams from_mean(double alpha);
};

/// Upward-closed event over distributions on a fixed base: membership is
/// preserved when pebbles are added.  The oracle must honor that promise;
/// excludes_empty records whether the all-zero distribution is outside.
struct MonotoneFamily {
    int base_size = 1;
    bool excludes_empty = true;
    std::function<bool(const PebbleDistribution&)> contains;
    std::string name;
};

struct Estimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t samples = 0;
};

long long sample_geometric(const GeometricParams& gp, Rng& rng);

/// Uniform over all distributions with the given total: each coordinate drawn
/// from its exact marginal on the remaining total (stars and bars count, not
/// a multinomial).
PebbleDistribution sample_uniform_total(int n, long long total, Rng& rng);
void sample_uniform_total_into(PebbleDistribution& out, int n, long long total, Rng& rng);

/// Product of geometrics tuned so the expected total is x.
PebbleDistribution sample_geometric_product(int n, double x, Rng& rng);
void sample_geometric_product_into(PebbleDistribution& out, int n, double x, Rng& rng);

BigInt composition_count(int n, long long total);

/// Visit every distribution with the given total exactly once, largest-first
/// lexicographic order: (T,0,..), .., (0,..,T).  Errors if the count exceeds
/// the cap.  The visitor may return false to stop early.
void enumerate_compositions(int n, long long total,
                            const std::function<bool(const PebbleDistribution&)>& visit,
                            std::uint64_t cap = 10'000'000);

/// Exact mu_T(M) by enumeration of the level.
Rational mu_exact(const MonotoneFamily& M, long long total, std::uint64_t cap = 10'000'000);

/// Monte Carlo nu_x(M) with a 95% Wilson interval.  The generator is used as
/// a stream root, not consumed: the same root and sample count always give
/// the same estimate, so callers wanting fresh draws pass a fresh child.
Estimate nu_estimate(const MonotoneFamily& M, double x, std::uint64_t samples, const Rng& rng,
                     unsigned workers = 1);

/// Solvability of a fixed graph as a monotone family over its vertices.
/// The solver choice is resolved once, not per sample.
MonotoneFamily solvability_family(Graph g, SolveMethod method = SolveMethod::Auto);

/// Same family from the shape parameters alone, for bouquets whose clique
/// is too large to lay out edge by edge.
MonotoneFamily bouquet_solvability_family(const BouquetSpec& spec);

} // namespace pebblex
