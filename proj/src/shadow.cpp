#include "pebblex/shadow.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "pebblex/errors.hpp"

namespace pebblex {

namespace {

long long total_of(const std::vector<long long>& v) {
    long long t = 0;
    for (long long c : v) {
        if (c < 0) throw PreconditionError("multiset coordinates must be >= 0");
        t += c;
    }
    return t;
}

} // namespace

MultisetSet make_multiset_set(int base_size, std::vector<std::vector<long long>> elems) {
    if (base_size < 1) throw PreconditionError("base size must be >= 1");
    MultisetSet S;
    S.base_size = base_size;
    S.level = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (static_cast<int>(elems[i].size()) != base_size)
            throw PreconditionError("multiset has wrong base size");
        long long t = total_of(elems[i]);
        if (i == 0) S.level = t;
        else if (t != S.level)
            throw PreconditionError("multisets in a set must share one total");
    }
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    S.elems = std::move(elems);
    return S;
}

MultisetSet lower_shadow(const MultisetSet& S) {
    MultisetSet out;
    out.base_size = S.base_size;
    out.level = S.level > 0 ? S.level - 1 : 0;
    if (S.level == 0) return out;
    std::vector<std::vector<long long>> kids;
    for (const auto& e : S.elems) {
        for (int i = 0; i < S.base_size; ++i) {
            if (e[static_cast<std::size_t>(i)] == 0) continue;
            auto k = e;
            k[static_cast<std::size_t>(i)] -= 1;
            kids.push_back(std::move(k));
        }
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    out.elems = std::move(kids);
    return out;
}

BigInt cascade_value(long long t, const std::vector<long long>& d) {
    BigInt s = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        long long ti = t - static_cast<long long>(i);
        s += binomial(ti - 1 + d[i], ti);
    }
    return s;
}

CascadeRep cascade_representation(const BigInt& s, long long t,
                                  std::optional<long long> base_size) {
    if (s < 1) throw PreconditionError("cascade needs s >= 1");
    if (t < 1) throw PreconditionError("cascade needs t >= 1");
    if (base_size) {
        if (*base_size < 1) throw PreconditionError("base size must be >= 1");
        if (s >= binomial(t - 1 + *base_size, t))
            throw PreconditionError("s is not below the level size for this base");
    }
    CascadeRep rep;
    rep.s = s;
    rep.t = t;
    BigInt rem = s;
    for (long long i = 0; rem > 0; ++i) {
        if (i >= t) throw std::logic_error("cascade expansion exceeded t terms");
        long long ti = t - i;
        // largest d with C(ti - 1 + d, ti) <= rem;  d = 1 always qualifies
        long long lo = 1, hi = 2;
        while (binomial(ti - 1 + hi, ti) <= rem) { lo = hi; hi *= 2; }
        while (lo + 1 < hi) {
            long long mid = lo + (hi - lo) / 2;
            if (binomial(ti - 1 + mid, ti) <= rem) lo = mid;
            else hi = mid;
        }
        if (!rep.d.empty() && lo > rep.d.back())
            throw std::logic_error("cascade expansion lost monotonicity");
        rep.d.push_back(lo);
        rem -= binomial(ti - 1 + lo, ti);
    }
    if (cascade_value(t, rep.d) != s) throw std::logic_error("cascade expansion does not add up");
    return rep;
}

CascadeShadowCheck cascade_shadow_inequality(long long t, long long base_size,
                                             const std::vector<long long>& d) {
    if (t < 1 || base_size < 1) throw PreconditionError("need t >= 1 and base size >= 1");
    if (d.empty() || static_cast<long long>(d.size()) > t)
        throw PreconditionError("cascade needs 1 <= r <= t terms");
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (d[i] < 1) throw PreconditionError("cascade terms must be >= 1");
        if (i > 0 && d[i] > d[i - 1]) throw PreconditionError("cascade terms must be nonincreasing");
    }
    if (d[0] >= base_size) throw PreconditionError("cascade head must be below the base size");
    CascadeShadowCheck out;
    BigInt snum = cascade_value(t, d);
    BigInt qnum = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        long long ti = t - static_cast<long long>(i);
        qnum += binomial(ti - 2 + d[i], ti - 1);
    }
    out.p = Rational(snum, binomial(t - 1 + base_size, t));
    out.q = Rational(qnum, binomial(t - 2 + base_size, t - 1));
    out.holds = (Rational(t - 1) + out.p) * out.q >= out.p * Rational(t);
    return out;
}

namespace {

struct TransportLevels {
    std::vector<std::vector<long long>> upper; // level total+1
    std::vector<std::vector<long long>> lower; // level total
    std::vector<std::vector<int>> shadow_of;   // indices into lower, per upper elem
};

TransportLevels build_levels(int base_size, long long total) {
    TransportLevels L;
    enumerate_compositions(base_size, total + 1, [&](const PebbleDistribution& d) {
        L.upper.emplace_back(d.counts.begin(), d.counts.end());
        return true;
    });
    std::map<std::vector<long long>, int> index;
    enumerate_compositions(base_size, total, [&](const PebbleDistribution& d) {
        std::vector<long long> v(d.counts.begin(), d.counts.end());
        index.emplace(v, static_cast<int>(L.lower.size()));
        L.lower.push_back(std::move(v));
        return true;
    });
    L.shadow_of.resize(L.upper.size());
    for (std::size_t u = 0; u < L.upper.size(); ++u) {
        for (int i = 0; i < base_size; ++i) {
            if (L.upper[u][static_cast<std::size_t>(i)] == 0) continue;
            auto k = L.upper[u];
            k[static_cast<std::size_t>(i)] -= 1;
            L.shadow_of[u].push_back(index.at(k));
        }
    }
    return L;
}

} // namespace

ShadowTransportReport verify_shadow_transport(int base_size, long long total,
                                              TransportMode mode, std::uint64_t trials,
                                              const Rng* rng) {
    if (base_size < 1 || total < 0)
        throw PreconditionError("need base size >= 1 and total >= 0");
    TransportLevels L = build_levels(base_size, total);
    std::size_t nu = L.upper.size();
    std::size_t nl = L.lower.size();
    if (mode == TransportMode::Exhaustive && nu > 20)
        throw BudgetError("upper level too large for exhaustive subsets");
    if (mode == TransportMode::Sampled && rng == nullptr)
        throw PreconditionError("sampled mode needs a generator");

    ShadowTransportReport rep;
    std::vector<char> mark(nl, 0);
    std::vector<char> pick(nu, 0);
    Rational T1(total + 1);

    auto check_subset = [&](std::uint64_t members, std::optional<std::uint64_t> mask) {
        std::fill(mark.begin(), mark.end(), 0);
        std::size_t shadow_count = 0;
        for (std::size_t u = 0; u < nu; ++u) {
            if (!pick[u]) continue;
            for (int idx : L.shadow_of[u]) {
                if (!mark[static_cast<std::size_t>(idx)]) {
                    mark[static_cast<std::size_t>(idx)] = 1;
                    ++shadow_count;
                }
            }
        }
        Rational mu1(members, nu);
        Rational mu0(shadow_count, nl);
        Rational bound;
        if (mu1 == 1) {
            bound = 1; // witness grows without bound, x/(T+x) -> 1
        } else {
            Rational x = T1 * mu1 / (Rational(1) - mu1);
            bound = x == 0 ? Rational(0) : x / (Rational(total) + x);
        }
        ++rep.cases;
        if (mu0 < bound) {
            ++rep.violations;
            if (!rep.first_violation && mask) rep.first_violation = mask;
        } else if (members > 0 && mu0 == bound) {
            rep.saw_tight_case = true;
        }
    };

    if (mode == TransportMode::Exhaustive) {
        for (std::uint64_t mask = 0; mask < (1ull << nu); ++mask) {
            std::uint64_t members = 0;
            for (std::size_t u = 0; u < nu; ++u) {
                pick[u] = (mask >> u) & 1 ? 1 : 0;
                members += pick[u];
            }
            check_subset(members, mask);
        }
    } else {
        Rng local = rng->derive(0x5ad0u);
        for (std::uint64_t t = 0; t < trials; ++t) {
            Rng r = local.derive(t);
            std::uint64_t members = 0;
            std::uint64_t mask = 0;
            for (std::size_t u = 0; u < nu; ++u) {
                pick[u] = (r.next_u64() & 1) ? 1 : 0;
                members += pick[u];
                if (pick[u] && u < 64) mask |= 1ull << u;
            }
            check_subset(members, nu <= 64 ? std::optional<std::uint64_t>(mask) : std::nullopt);
        }
    }
    return rep;
}

MuShapeReport mu_shape_classify(const MonotoneFamily& M, long long horizon, std::uint64_t cap) {
    if (horizon < 0) throw PreconditionError("horizon must be >= 0");
    MuShapeReport rep;
    rep.mu.reserve(static_cast<std::size_t>(horizon) + 1);
    for (long long T = 0; T <= horizon; ++T) rep.mu.push_back(mu_exact(M, T, cap));

    enum { Zero, Rising, Ones } phase = Zero;
    for (long long T = 0; T <= horizon; ++T) {
        const Rational& m = rep.mu[static_cast<std::size_t>(T)];
        if (m < 0 || m > 1) throw MuShapeViolation("level fraction outside [0,1]");
        switch (phase) {
            case Zero:
                if (m == 0) break;
                phase = m == 1 ? Ones : Rising;
                break;
            case Rising:
                if (m <= rep.mu[static_cast<std::size_t>(T - 1)])
                    throw MuShapeViolation("level fractions stopped rising before reaching one");
                if (m == 1) phase = Ones;
                break;
            case Ones:
                if (m != 1) throw MuShapeViolation("level fractions fell back below one");
                break;
        }
    }
    rep.shape = phase == Zero ? MuShape::AllZero
              : phase == Ones ? MuShape::RiseThenOnes
                              : MuShape::StillRising;
    return rep;
}

MonotoneFamily UpperSet::family() const {
    if (base_size < 1) throw PreconditionError("base size must be >= 1");
    MonotoneFamily M;
    M.base_size = base_size;
    M.name = "upper-set";
    bool has_zero_gen = false;
    for (const auto& g : generators) {
        if (static_cast<int>(g.size()) != base_size)
            throw PreconditionError("generator has wrong base size");
        bool all_zero = true;
        for (long long c : g) {
            if (c < 0) throw PreconditionError("generator coordinates must be >= 0");
            if (c > 0) all_zero = false;
        }
        has_zero_gen = has_zero_gen || all_zero;
    }
    M.excludes_empty = !has_zero_gen;
    auto gens = generators;
    M.contains = [gens](const PebbleDistribution& f) {
        for (const auto& g : gens) {
            bool above = true;
            for (std::size_t i = 0; i < g.size() && above; ++i)
                above = f.counts[i] >= g[i];
            if (above) return true;
        }
        return false;
    };
    return M;
}

UpperSet random_upper_set(int base_size, Rng& rng, int max_generators, long long coord_cap) {
    if (base_size < 1 || max_generators < 1 || coord_cap < 0)
        throw PreconditionError("bad upper set parameters");
    UpperSet U;
    U.base_size = base_size;
    int gens = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_generators)));
    for (int g = 0; g < gens; ++g) {
        std::vector<long long> v(static_cast<std::size_t>(base_size));
        for (auto& c : v) c = static_cast<long long>(rng.next_below(static_cast<std::uint64_t>(coord_cap) + 1));
        U.generators.push_back(std::move(v));
    }
    // drop generators dominated by another (their closure is redundant)
    std::vector<std::vector<long long>> keep;
    for (std::size_t i = 0; i < U.generators.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < U.generators.size() && !dominated; ++j) {
            if (i == j) continue;
            bool le = true;
            for (std::size_t k = 0; k < U.generators[i].size() && le; ++k)
                le = U.generators[j][k] <= U.generators[i][k];
            dominated = le && (U.generators[j] != U.generators[i] || j < i);
        }
        if (!dominated) keep.push_back(U.generators[i]);
    }
    U.generators = std::move(keep);
    return U;
}

} // namespace pebblex
