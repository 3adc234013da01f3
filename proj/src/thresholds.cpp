#include "pebblex/thresholds.hpp"

#include <cmath>
#include <limits>

#include "pebblex/errors.hpp"
#include "pebblex/parallel.hpp"
#include "pebblex/stats.hpp"

namespace pebblex {

namespace {

enum class HalfVerdict { Below, Above, Tie, Starved };

struct HalfQuery {
    HalfVerdict v = HalfVerdict::Starved;
    std::uint64_t samples = 0;
    WilsonInterval w;
};

// Sequential test of "success probability vs 1/2": sample in doubling
// batches, stop as soon as the Wilson interval at the requested z clears
// one half.  A tight interval still straddling 1/2 at the cap is a tie;
// a wide one means the cap was too small to decide.
template <typename Sampler>
HalfQuery half_test(const Rng& stream, double z, std::uint64_t cap, unsigned workers,
                    Sampler&& succ) {
    HalfQuery q;
    if (cap == 0) return q;
    std::uint64_t hits = 0, done = 0;
    std::uint64_t next = cap < 512 ? cap : 512;
    for (;;) {
        hits += parallel_count(stream, done, next - done, workers,
                               [&](Rng& r, std::uint64_t) { return succ(r); });
        done = next;
        q.samples = done;
        q.w = wilson_interval(hits, done, z);
        if (q.w.lo > 0.5) { q.v = HalfVerdict::Above; return q; }
        if (q.w.hi < 0.5) { q.v = HalfVerdict::Below; return q; }
        if (done >= cap) {
            q.v = (q.w.hi - q.w.lo <= 0.02) ? HalfVerdict::Tie : HalfVerdict::Starved;
            return q;
        }
        next = done > cap - done ? cap : 2 * done;
    }
}

struct QueryBudget {
    std::uint64_t remaining;
    std::uint64_t per_query;
    std::uint64_t used = 0;
    std::uint64_t query_index = 0;

    std::uint64_t next_cap() {
        return remaining < per_query ? remaining : per_query;
    }
    void charge(std::uint64_t samples) {
        used += samples;
        remaining -= samples < remaining ? samples : remaining;
    }
};

PebbleDistribution zero_dist(int n) {
    PebbleDistribution d;
    d.counts.assign(static_cast<std::size_t>(n), 0);
    return d;
}

} // namespace

long long uniform_threshold_exact(const MonotoneFamily& M, std::uint64_t enum_cap,
                                  long long total_cap) {
    if (!M.contains) throw PreconditionError("family has no membership oracle");
    auto reached = [&](long long T) { return mu_exact(M, T, enum_cap) >= Rational(1, 2); };
    if (reached(0)) return 0;
    long long lo = 0, hi = 1;
    while (!reached(hi)) {
        lo = hi;
        if (hi > total_cap) throw BudgetError("no threshold found below the total cap");
        hi *= 2;
    }
    while (lo + 1 < hi) {
        long long mid = lo + (hi - lo) / 2;
        (reached(mid) ? hi : lo) = mid;
    }
    return hi;
}

ThresholdEstimate uniform_threshold_mc(const MonotoneFamily& M, std::uint64_t seed,
                                       const McOptions& opts) {
    if (!M.contains) throw PreconditionError("family has no membership oracle");
    ThresholdEstimate est;
    est.seed = seed;
    est.method = "mc";
    if (M.contains(zero_dist(M.base_size))) {
        est.value = est.ci_low = est.ci_high = 0.0;
        return est;
    }

    Rng root(seed);
    QueryBudget budget{opts.budget, opts.per_query_cap};
    // the sequential test looks at up to ~20 doubling checkpoints, so split
    // the per-query error budget across them
    double z = two_sided_z(opts.alpha / 20.0);
    auto query = [&](long long T) {
        Rng stream = root.derive(budget.query_index++);
        HalfQuery q = half_test(stream, z, budget.next_cap(), opts.workers, [&](Rng& r) {
            thread_local PebbleDistribution buf;
            sample_uniform_total_into(buf, M.base_size, T, r);
            return M.contains(buf);
        });
        budget.charge(q.samples);
        return q;
    };

    // confident bracket: largest total confidently below and smallest
    // confidently at-or-above one half
    long long conf_lo = 0, conf_hi = -1;
    long long lo = 0, hi = -1;
    for (long long T = 1; hi < 0; T *= 2) {
        if (T > (1ll << 40)) throw BudgetError("no threshold found in the search range");
        HalfQuery q = query(T);
        bool reach = q.v == HalfVerdict::Above || q.v == HalfVerdict::Tie ||
                     (q.v == HalfVerdict::Starved && q.w.p_hat >= 0.5);
        bool confident = q.v != HalfVerdict::Starved;
        if (!confident) est.budget_exhausted = true;
        if (reach) {
            hi = T;
            if (confident) conf_hi = T;
        } else {
            lo = T;
            if (confident) conf_lo = T;
        }
        if (budget.remaining == 0 && hi < 0) {
            est.budget_exhausted = true;
            est.value = static_cast<double>(T);
            est.ci_low = static_cast<double>(conf_lo + 1);
            est.ci_high = std::numeric_limits<double>::infinity();
            est.samples_used = budget.used;
            return est;
        }
    }

    while (hi - lo > 1) {
        if (budget.remaining == 0) { est.budget_exhausted = true; break; }
        long long mid = lo + (hi - lo) / 2;
        HalfQuery q = query(mid);
        bool reach = q.v == HalfVerdict::Above || q.v == HalfVerdict::Tie ||
                     (q.v == HalfVerdict::Starved && q.w.p_hat >= 0.5);
        bool confident = q.v != HalfVerdict::Starved;
        if (!confident) est.budget_exhausted = true;
        if (reach) {
            hi = mid;
            if (confident) conf_hi = mid;
        } else {
            lo = mid;
            if (confident) conf_lo = mid;
        }
    }

    est.value = static_cast<double>(hi);
    est.ci_low = static_cast<double>(conf_lo + 1);
    est.ci_high = conf_hi < 0 ? std::numeric_limits<double>::infinity()
                              : static_cast<double>(conf_hi);
    est.samples_used = budget.used;
    return est;
}

ThresholdEstimate geometric_threshold(const MonotoneFamily& M, std::uint64_t seed,
                                      const McOptions& opts) {
    if (!M.contains) throw PreconditionError("family has no membership oracle");
    if (!M.excludes_empty || M.contains(zero_dist(M.base_size)))
        throw PreconditionError("geometric threshold needs the empty distribution outside the family");

    ThresholdEstimate est;
    est.seed = seed;
    est.method = "mc";

    Rng root(seed);
    QueryBudget budget{opts.budget, opts.per_query_cap};
    // the sequential test looks at up to ~20 doubling checkpoints, so split
    // the per-query error budget across them
    double z = two_sided_z(opts.alpha / 20.0);
    auto query = [&](double x) {
        Rng stream = root.derive(budget.query_index++);
        HalfQuery q = half_test(stream, z, budget.next_cap(), opts.workers, [&](Rng& r) {
            thread_local PebbleDistribution buf;
            sample_geometric_product_into(buf, M.base_size, x, r);
            return M.contains(buf);
        });
        budget.charge(q.samples);
        return q;
    };

    double bs = static_cast<double>(M.base_size);
    double lo = bs * opts.bracket_lo_scale;
    double hi = bs * opts.bracket_hi_scale;
    for (int tries = 0;; ++tries) {
        if (budget.remaining == 0)
            throw BudgetError("sample budget exhausted before the root was bracketed");
        if (tries > 40) throw PreconditionError("no lower bracket: the family is hit too easily");
        if (query(lo).v == HalfVerdict::Below) break;
        lo /= 16.0;
    }
    for (int tries = 0;; ++tries) {
        if (budget.remaining == 0)
            throw BudgetError("sample budget exhausted before the root was bracketed");
        if (tries > 40) throw PreconditionError("no upper bracket: the family may be empty");
        if (query(hi).v == HalfVerdict::Above) break;
        hi *= 16.0;
    }

    double value = std::numeric_limits<double>::quiet_NaN();
    while (hi - lo > opts.x_atol + opts.x_rtol * hi) {
        if (budget.remaining == 0) { est.budget_exhausted = true; break; }
        double mid = std::sqrt(lo * hi); // bisect in log scale
        HalfQuery q = query(mid);
        if (q.v == HalfVerdict::Above) hi = mid;
        else if (q.v == HalfVerdict::Below) lo = mid;
        else {
            // the success rate at mid is statistically pinned to one half,
            // which is exactly what the threshold means
            value = mid;
            if (q.v == HalfVerdict::Starved) est.budget_exhausted = true;
            break;
        }
    }
    est.value = std::isnan(value) ? 0.5 * (lo + hi) : value;
    est.ci_low = lo;
    est.ci_high = hi;
    est.samples_used = budget.used;
    return est;
}

ThresholdEstimate geometric_pebbling_threshold(const Graph& g, std::uint64_t seed,
                                               const McOptions& opts, SolveMethod method) {
    return geometric_threshold(solvability_family(g, method), seed, opts);
}

ChebyshevBracket chebyshev_bracket(double t_prime, long long base_size, double theta) {
    if (!(t_prime > 0.0)) throw PreconditionError("bracket needs t' > 0");
    if (base_size < 1) throw PreconditionError("bracket needs base size >= 1");
    double b = static_cast<double>(base_size);
    double s = std::sqrt(t_prime + t_prime * t_prime / b);
    if (!(theta > std::sqrt(2.0) && theta < t_prime / s))
        throw PreconditionError("theta must lie in (sqrt 2, t'/s)");
    ChebyshevBracket br;
    br.t_prime = t_prime;
    br.spread = s;
    br.theta = theta;
    br.lower = std::ceil(t_prime - theta * s) * (1.0 - 2.0 / (theta * theta));
    br.upper = 1.0 + std::floor(t_prime + theta * s) * (1.0 + 2.0 / (theta * theta - 2.0));
    return br;
}

std::vector<RatioRow> threshold_ratio_table(const std::vector<MonotoneFamily>& families,
                                            std::uint64_t seed, const McOptions& opts,
                                            bool prefer_exact_uniform, std::uint64_t enum_cap) {
    std::vector<RatioRow> rows;
    Rng root(seed);
    for (std::size_t i = 0; i < families.size(); ++i) {
        const MonotoneFamily& M = families[i];
        RatioRow row;
        row.label = M.name.empty() ? "family-" + std::to_string(i) : M.name;
        row.base_size = M.base_size;
        bool have_exact = false;
        if (prefer_exact_uniform) {
            try {
                long long t = uniform_threshold_exact(M, enum_cap);
                row.uniform.value = row.uniform.ci_low = row.uniform.ci_high =
                    static_cast<double>(t);
                row.uniform.method = "exact";
                have_exact = true;
            } catch (const BudgetError&) {
            }
        }
        if (!have_exact)
            row.uniform = uniform_threshold_mc(M, root.derive(i, 1).next_u64(), opts);
        row.geometric = geometric_threshold(M, root.derive(i, 2).next_u64(), opts);
        row.ratio = row.geometric.value > 0.0
                        ? row.uniform.value / row.geometric.value
                        : std::numeric_limits<double>::infinity();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace pebblex
