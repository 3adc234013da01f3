#include <cmath>

#include "doctest.h"
#include "pebblex/errors.hpp"
#include "pebblex/graphs.hpp"
#include "pebblex/multiset_dist.hpp"
#include "pebblex/thresholds.hpp"

using namespace pebblex;

namespace {

MonotoneFamily first_coord() {
    return {2, true, [](const PebbleDistribution& d) { return d[0] >= 1; }, "first>=1"};
}

// either coordinate occupied; nu_x = 1 - (1 - f)^2 with f = x/(2+x)
MonotoneFamily union_family() {
    return {2, true, [](const PebbleDistribution& d) { return d[0] >= 1 || d[1] >= 1; },
            "union"};
}

// both coordinates occupied; nu_x = f^2
MonotoneFamily intersection_family() {
    return {2, true, [](const PebbleDistribution& d) { return d[0] >= 1 && d[1] >= 1; },
            "intersection"};
}

McOptions quick_opts() {
    McOptions o;
    o.budget = 30'000'000;
    o.per_query_cap = 200'000;
    o.x_rtol = 5e-3;
    return o;
}

} // namespace

TEST_CASE("uniform threshold, exact") {
    // mu_T = T/(T+1) reaches one half exactly at T = 1: a tie counts
    CHECK(uniform_threshold_exact(first_coord()) == 1);

    // K1 solvability flips at the first pebble
    CHECK(uniform_threshold_exact(solvability_family(make_path(1))) == 0 + 1);

    // 4-path: mu_3 = 1/5, mu_4 = 23/35
    MonotoneFamily p4 = solvability_family(make_path(4));
    CHECK(mu_exact(p4, 3) == Rational(1, 5));
    CHECK(mu_exact(p4, 4) == Rational(23, 35));
    CHECK(mu_exact(p4, 7) == Rational(59, 60));
    CHECK(mu_exact(p4, 8) == Rational(1));
    CHECK(uniform_threshold_exact(p4) == 4);

    MonotoneFamily never{2, true, [](const PebbleDistribution&) { return false; }, "never"};
    CHECK_THROWS_AS(uniform_threshold_exact(never, 1000, 64), BudgetError);
}

TEST_CASE("uniform threshold, Monte Carlo") {
    McOptions o;
    o.per_query_cap = 40'000; // wide enough for a clean tie at exactly 1/2
    o.budget = 4'000'000;

    // the exact-tie family: estimate 1 with the interval collapsed onto it
    ThresholdEstimate tie = uniform_threshold_mc(first_coord(), 7, o);
    CHECK(tie.value == 1.0);
    CHECK(tie.ci_low == 1.0);
    CHECK(tie.ci_high == 1.0);
    CHECK_FALSE(tie.budget_exhausted);
    CHECK(tie.method == "mc");

    // matches the enumeration answer on the 4-path
    ThresholdEstimate p4 = uniform_threshold_mc(solvability_family(make_path(4)), 11, o);
    CHECK(p4.value == 4.0);
    CHECK(p4.ci_low == 4.0);
    CHECK(p4.ci_high == 4.0);

    // a family containing the empty distribution thresholds at zero
    MonotoneFamily all{3, false, [](const PebbleDistribution&) { return true; }, "all"};
    CHECK(uniform_threshold_mc(all, 3, o).value == 0.0);
}

TEST_CASE("geometric threshold on algebraic families") {
    McOptions o = quick_opts();

    // 1 - (2/(2+x))^2 = 1/2 at x = 2(sqrt 2 - 1)
    double union_root = 2.0 * (std::sqrt(2.0) - 1.0);
    ThresholdEstimate u = geometric_threshold(union_family(), 101, o);
    CHECK(u.ci_low <= union_root);
    CHECK(u.ci_high >= union_root);
    CHECK(std::abs(u.value - union_root) < 0.04 * union_root);

    // (x/(2+x))^2 = 1/2 at x = 2/(sqrt 2 - 1)
    double inter_root = 2.0 / (std::sqrt(2.0) - 1.0);
    ThresholdEstimate i = geometric_threshold(intersection_family(), 102, o);
    CHECK(i.ci_low <= inter_root);
    CHECK(i.ci_high >= inter_root);
    CHECK(std::abs(i.value - inter_root) < 0.04 * inter_root);

    // K1: nu_x = x/(1+x), root exactly 1
    ThresholdEstimate k1 = geometric_threshold(solvability_family(make_path(1)), 103, o);
    CHECK(k1.ci_low <= 1.0);
    CHECK(k1.ci_high >= 1.0);
    CHECK(std::abs(k1.value - 1.0) < 0.04);
}

TEST_CASE("geometric threshold preconditions") {
    MonotoneFamily with_empty{2, false, [](const PebbleDistribution&) { return true; }, "all"};
    CHECK_THROWS_AS(geometric_threshold(with_empty, 1), PreconditionError);

    // a family claiming to exclude empty but not doing so is caught
    MonotoneFamily lying{2, true, [](const PebbleDistribution&) { return true; }, "liar"};
    CHECK_THROWS_AS(geometric_threshold(lying, 1), PreconditionError);
}

TEST_CASE("geometric threshold under starvation") {
    // enough budget to bracket but not to bisect: flagged, interval still honest
    McOptions tight;
    tight.budget = 1'200;
    tight.per_query_cap = 600;
    ThresholdEstimate e = geometric_threshold(union_family(), 5, tight);
    CHECK(e.budget_exhausted);
    double root = 2.0 * (std::sqrt(2.0) - 1.0);
    CHECK(e.ci_low <= root);
    CHECK(e.ci_high >= root);

    // not even enough to bracket
    McOptions starved;
    starved.budget = 300;
    CHECK_THROWS_AS(geometric_threshold(union_family(), 5, starved), BudgetError);
}

TEST_CASE("threshold runs are reproducible across workers") {
    McOptions o;
    o.per_query_cap = 50'000;
    o.budget = 5'000'000;
    o.x_rtol = 0.02;
    Graph p16 = make_path(16);
    ThresholdEstimate a = geometric_pebbling_threshold(p16, 99, o);
    ThresholdEstimate b = geometric_pebbling_threshold(p16, 99, o);
    McOptions o3 = o;
    o3.workers = 3;
    ThresholdEstimate c = geometric_pebbling_threshold(p16, 99, o3);
    CHECK(a.value == b.value);
    CHECK(a.value == c.value);
    CHECK(a.ci_low == c.ci_low);
    CHECK(a.samples_used == c.samples_used);
    CHECK(a.value > 0.0);
}

TEST_CASE("deviation bracket") {
    ChebyshevBracket br = chebyshev_bracket(10.0, 4, 1.5);
    CHECK(br.spread == doctest::Approx(std::sqrt(35.0)));
    CHECK(br.lower == doctest::Approx(2.0 * (1.0 - 2.0 / 2.25)));
    CHECK(br.upper == doctest::Approx(1.0 + 18.0 * 9.0));
    CHECK(br.lower < br.upper);

    CHECK_THROWS_AS(chebyshev_bracket(10.0, 4, 1.2), PreconditionError); // theta <= sqrt 2
    CHECK_THROWS_AS(chebyshev_bracket(10.0, 4, 1.8), PreconditionError); // theta >= t'/s
    CHECK_THROWS_AS(chebyshev_bracket(10.0, 1, 1.5), PreconditionError); // spread too wide
}

TEST_CASE("ratio table") {
    McOptions o = quick_opts();
    std::vector<MonotoneFamily> fams{first_coord()};
    auto rows = threshold_ratio_table(fams, 2024, o);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].uniform.method == "exact");
    CHECK(rows[0].uniform.value == 1.0);
    // geometric root of f = x/(2+x) = 1/2 is x = 2
    CHECK(rows[0].geometric.value == doctest::Approx(2.0).epsilon(0.05));
    CHECK(rows[0].ratio == doctest::Approx(0.5).epsilon(0.06));
}
