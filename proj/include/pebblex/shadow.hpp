#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pebblex/multiset_dist.hpp"
#include "pebblex/rational.hpp"
#include "pebblex/rng.hpp"

namespace pebblex {

/// A set of multisets over a common base, all with the same total.
struct MultisetSet {
    int base_size = 1;
    long long level = 0;
    std::vector<std::vector<long long>> elems; // sorted, no duplicates

    std::size_t size() const { return elems.size(); }
};

MultisetSet make_multiset_set(int base_size, std::vector<std::vector<long long>> elems);

/// All multisets obtained by removing one pebble from a member; lives one
/// level down.  The shadow of a set at level 0 is empty.
MultisetSet lower_shadow(const MultisetSet& S);

/// s = sum_i C(t - i - 1 + d_i, t - i) with d_0 >= d_1 >= ... >= d_{r-1} >= 1
/// and r <= t; the greedy expansion is unique.
struct CascadeRep {
    BigInt s;
    long long t = 1;
    std::vector<long long> d;
};

CascadeRep cascade_representation(const BigInt& s, long long t,
                                  std::optional<long long> base_size = std::nullopt);
BigInt cascade_value(long long t, const std::vector<long long>& d);

/// Whether (t - 1 + p) q >= p t holds exactly, where p and q are the level
/// fractions taken up by the cascade set and its shadow.
struct CascadeShadowCheck {
    Rational p;
    Rational q;
    bool holds = false;
};

CascadeShadowCheck cascade_shadow_inequality(long long t, long long base_size,
                                             const std::vector<long long>& d);

/// One shadow transport instance: if mu_{T+1}(S) is at least x/(T+1+x) then
/// mu_T of the shadow is at least x/(T+x), checked at the exact witness
/// x = (T+1) mu / (1 - mu).
struct ShadowTransportReport {
    std::uint64_t cases = 0;
    std::uint64_t violations = 0;
    // first violation, if any, as a bitmask over the upper level
    std::optional<std::uint64_t> first_violation;
    bool saw_tight_case = false; // some case met the lower bound with equality
};

enum class TransportMode { Exhaustive, Sampled };

ShadowTransportReport verify_shadow_transport(int base_size, long long total,
                                              TransportMode mode,
                                              std::uint64_t trials = 0,
                                              const Rng* rng = nullptr);

/// How mu_T(M) behaves as T grows: identically zero over the horizon, zero
/// then strictly rising then pinned at one, or still strictly rising at the
/// end of the horizon.
enum class MuShape { AllZero, RiseThenOnes, StillRising };

struct MuShapeViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MuShapeReport {
    MuShape shape = MuShape::AllZero;
    std::vector<Rational> mu; // mu_0 .. mu_horizon
};

MuShapeReport mu_shape_classify(const MonotoneFamily& M, long long horizon,
                                std::uint64_t cap = 10'000'000);

/// Upward closure of a finite generator list, as a membership family.
struct UpperSet {
    int base_size = 1;
    std::vector<std::vector<long long>> generators;

    MonotoneFamily family() const;
};

UpperSet random_upper_set(int base_size, Rng& rng, int max_generators = 4,
                          long long coord_cap = 6);

} // namespace pebblex
