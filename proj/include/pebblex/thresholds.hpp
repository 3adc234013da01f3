#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pebblex/graphs.hpp"
#include "pebblex/multiset_dist.hpp"
#include "pebblex/rng.hpp"

namespace pebblex {

/// A threshold answer.  For the uniform model the value is the minimal
/// integer total whose level fraction reaches one half; for the geometric
/// model it is the root of nu_x = 1/2 in x.  budget_exhausted means the
/// sample budget ran out before the interval met the requested accuracy,
/// in which case [ci_low, ci_high] is an honest outer bracket.
struct ThresholdEstimate {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t samples_used = 0;
    std::uint64_t seed = 0;
    std::string method; // "exact" or "mc"
    bool budget_exhausted = false;
};

struct McOptions {
    std::uint64_t budget = 50'000'000;       // total draws for the whole call
    std::uint64_t per_query_cap = 5'000'000; // draws for a single half-test
    double alpha = 0.01;                     // per-query two-sided error rate
    unsigned workers = 1;
    // stopping rule for the geometric bisection
    double x_atol = 0.0;
    double x_rtol = 1e-3;
    // initial bracket for the geometric root, as multiples of the base size
    double bracket_lo_scale = 0x1p-20;
    double bracket_hi_scale = 0x1p20;
};

/// Exact uniform threshold by enumeration; errors if a level before the
/// threshold is too large to enumerate or the search passes total_cap.
long long uniform_threshold_exact(const MonotoneFamily& M, std::uint64_t enum_cap = 10'000'000,
                                  long long total_cap = 1'000'000);

ThresholdEstimate uniform_threshold_mc(const MonotoneFamily& M, std::uint64_t seed,
                                       const McOptions& opts = {});

ThresholdEstimate geometric_threshold(const MonotoneFamily& M, std::uint64_t seed,
                                      const McOptions& opts = {});

/// Geometric threshold of the solvability family of a graph, in the
/// total-pebbles scale (divide by the vertex count for the per-vertex mean).
ThresholdEstimate geometric_pebbling_threshold(const Graph& g, std::uint64_t seed,
                                               const McOptions& opts = {},
                                               SolveMethod method = SolveMethod::Auto);

/// Deviation bracket tying the two models together: with s = sqrt(t' + t'^2/b)
/// and sqrt(2) < theta < t'/s, a geometric threshold t' pins the uniform one into
/// [ceil(t' - theta s) (1 - 2/theta^2), 1 + floor(t' + theta s) (1 + 2/(theta^2 - 2))].
struct ChebyshevBracket {
    double t_prime = 0.0;
    double spread = 0.0;
    double theta = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

ChebyshevBracket chebyshev_bracket(double t_prime, long long base_size, double theta);

struct RatioRow {
    std::string label;
    int base_size = 1;
    ThresholdEstimate uniform;
    ThresholdEstimate geometric;
    double ratio = 0.0; // uniform / geometric
};

std::vector<RatioRow> threshold_ratio_table(const std::vector<MonotoneFamily>& families,
                                            std::uint64_t seed, const McOptions& opts = {},
                                            bool prefer_exact_uniform = true,
                                            std::uint64_t enum_cap = 2'000'000);

} // namespace pebblex
