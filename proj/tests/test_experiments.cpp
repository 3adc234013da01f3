#include <cmath>

#include "doctest.h"
#include "pebblex/errors.hpp"
#include "pebblex/experiments.hpp"

using namespace pebblex;

TEST_CASE("phi and its inverse") {
    CHECK(phi(0.0) == 0.0);
    CHECK(phi(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    for (double a : {0.01, 0.3, 1.0, 5.0, 123.0})
        CHECK(phi_inv(phi(a)) == doctest::Approx(a).epsilon(1e-12));
    // strictly increasing
    double prev = -1.0;
    for (double a = 0.0; a <= 4.0; a += 0.25) {
        CHECK(phi(a) > prev);
        prev = phi(a);
    }
    CHECK_THROWS_AS(phi(-0.1), PreconditionError);
    CHECK_THROWS_AS(phi_inv(-0.1), PreconditionError);
}

TEST_CASE("path threshold prediction") {
    CHECK(path_threshold_prediction(2) == doctest::Approx(4.0 * M_E).epsilon(1e-15));
    CHECK(path_threshold_prediction(1024) == doctest::Approx(7880.1569754496).epsilon(1e-10));
    // superlinear in n but well under n log n at this size
    double p16 = path_threshold_prediction(65536);
    CHECK(p16 / 65536.0 > path_threshold_prediction(1024) / 1024.0);
    CHECK(p16 < 65536.0 * 16.0);
    CHECK_THROWS_AS(path_threshold_prediction(1), PreconditionError);
}

TEST_CASE("bouquet prediction, short arms") {
    BouquetKnobs k;
    k.l0 = 7; // L = 9 needs the window [7, 16 - 7]
    BouquetSpec b{65536, 1, 9};
    BouquetPrediction p = bouquet_prediction_small(b, k);
    CHECK(p.regime == std::string("short-arms"));
    CHECK(p.beta == doctest::Approx(0.0665282013).epsilon(1e-8));
    CHECK(p.total == doctest::Approx(4359.992203).epsilon(1e-8));
    CHECK(p.band_low == doctest::Approx(p.total * 0.5).epsilon(1e-12));
    CHECK(p.band_high == doctest::Approx(p.total * 1.5).epsilon(1e-12));

    // the default margin leaves no admissible L = 9 at n = 2^16
    CHECK_THROWS_AS(bouquet_prediction_small(b, BouquetKnobs{}), PreconditionError);
    // arms crowding out the clique
    CHECK_THROWS_AS(bouquet_prediction_small(BouquetSpec{65536, 4000, 9}, k),
                    PreconditionError);
}

TEST_CASE("bouquet prediction, long arms") {
    BouquetKnobs k;
    k.g0 = 1024;
    BouquetSpec b{262144, 1024, 23};
    BouquetPrediction p = bouquet_prediction_large_g(b, k);
    CHECK(p.regime == std::string("long-arms"));
    CHECK(p.beta == doctest::Approx(9.5391911927).epsilon(1e-8));
    CHECK(p.total == doctest::Approx(2500641.736).epsilon(1e-8));
    double eta = std::pow(10.0, -0.25);
    CHECK(p.band_low == doctest::Approx(p.total / (1.0 + eta)).epsilon(1e-12));
    CHECK(p.band_high == doctest::Approx(p.total / (1.0 - eta)).epsilon(1e-12));

    // more arms cost more pebbles
    BouquetPrediction p2 = bouquet_prediction_large_g(BouquetSpec{262144, 2048, 23}, k);
    CHECK(p2.beta > p.beta);

    // arm count below the cutoff
    CHECK_THROWS_AS(bouquet_prediction_large_g(b, BouquetKnobs{}), PreconditionError);
    // arm length outside the admissible window above log2 n
    CHECK_THROWS_AS(bouquet_prediction_large_g(BouquetSpec{262144, 1024, 22}, k),
                    PreconditionError);
    // arms plus their shadow exceeding the vertex budget
    CHECK_THROWS_AS(bouquet_prediction_large_g(BouquetSpec{262144, 6000, 24}, k),
                    PreconditionError);
}

TEST_CASE("target range and global bounds") {
    SpectrumRange r = spectrum_target_range(65536);
    CHECK(r.low == 256.0);
    CHECK(r.high == doctest::Approx(826613.986731).epsilon(1e-9));

    SpectrumRange g = global_threshold_bounds(65536);
    CHECK(g.low == doctest::Approx(213.13398046).epsilon(1e-9));
    CHECK(g.high == doctest::Approx(2246969.7793).epsilon(1e-9));

    // every constructible target respects the universal bounds
    CHECK(g.low < r.low);
    CHECK(r.high < g.high);

    // both ends grow with n
    SpectrumRange r2 = spectrum_target_range(1 << 20);
    CHECK(r2.low > r.low);
    CHECK(r2.high > r.high);
    CHECK_THROWS_AS(global_threshold_bounds(2), PreconditionError);
}

TEST_CASE("spectrum construction") {
    BouquetKnobs k;
    k.g0 = 4;
    k.l0 = 2;

    // low end: single short arm
    SpectrumPlan lo = spectrum_construct(65536, 256.0, k);
    CHECK(lo.feasible);
    CHECK(lo.regime == std::string("short-arms"));
    CHECK(lo.g == 1);
    CHECK(lo.ratio >= 1.0 / k.k_factor);
    CHECK(lo.ratio <= k.k_factor);

    // high end: many long arms
    SpectrumPlan hi = spectrum_construct(65536, 826613.0, k);
    CHECK(hi.feasible);
    CHECK(hi.regime == std::string("long-arms"));
    CHECK(hi.g > 1);
    CHECK(2 * hi.g * hi.L <= 65536);

    // out of range on both sides
    CHECK_FALSE(spectrum_construct(65536, 100.0, k).feasible);
    CHECK_FALSE(spectrum_construct(65536, 1e7, k).feasible);
    CHECK(spectrum_construct(65536, 100.0, k).reason ==
          "target outside the attainable range");

    // the stock cutoffs need a much bigger graph than 2^16
    CHECK_THROWS_AS(spectrum_construct(65536, 1000.0, BouquetKnobs{}), PreconditionError);
}

TEST_CASE("spectrum scan covers the whole range at relaxed cutoffs") {
    BouquetKnobs k;
    k.g0 = 4;
    k.l0 = 2;
    auto plans = spectrum_scan(65536, 9, k);
    REQUIRE(plans.size() == 9);
    for (const auto& p : plans) {
        CAPTURE(p.target_total);
        CHECK(p.feasible);
        CHECK(p.ratio >= 1.0 / k.k_factor);
        CHECK(p.ratio <= k.k_factor);
        // the planned shape is a legal bouquet
        BouquetSpec spec{65536, p.g, p.L};
        CHECK_NOTHROW(spec.validate());
        CHECK(2 * p.g * p.L <= 65536);
    }
    // targets sweep monotonically
    for (std::size_t i = 1; i < plans.size(); ++i)
        CHECK(plans[i].target_total > plans[i - 1].target_total);
    CHECK_THROWS_AS(spectrum_scan(65536, 1, k), PreconditionError);
}

TEST_CASE("unsolvability event probabilities") {
    GeolbRow r100 = geolb_row(100);
    CHECK(r100.p == doctest::Approx(0.923143280506).epsilon(1e-10));
    CHECK(r100.q == doctest::Approx(0.552972482002).epsilon(1e-10));
    CHECK(geolb_row(1000).q == doctest::Approx(0.517752352425).epsilon(1e-10));
    CHECK(geolb_row(10000).q == doctest::Approx(0.505720408193).epsilon(1e-10));

    // with one vertex the event is just "no pebble at all", and that has
    // probability p: the two formula pieces collapse
    GeolbRow r1 = geolb_row(1);
    CHECK(r1.q == doctest::Approx(r1.p).epsilon(1e-14));

    // q stays above one half and decays like n^{-1/2} towards it
    auto rows = geolb_scan({1, 100, 1000, 10000, 1000000});
    for (const auto& r : rows) CHECK(r.q > 0.5);
    double slope = (std::log(geolb_row(10000).q - 0.5) - std::log(r100.q - 0.5)) /
                   (std::log(10000.0) - std::log(100.0));
    CHECK(slope == doctest::Approx(-0.48331165).epsilon(1e-6));
    CHECK(slope > -0.6);
    CHECK(slope < -0.4);
    CHECK_THROWS_AS(geolb_row(0), PreconditionError);
}

TEST_CASE("distance-based unpebblability bound") {
    // 5-path centre: all vertices within distance 2
    DistanceBound b = distance_unpebblable_bound(5, 2, 8.0);
    CHECK(b.k == 2);
    CHECK(b.simple == doctest::Approx(0.73231729).epsilon(1e-7));
    CHECK(b.omega_form == doctest::Approx(0.23492354).epsilon(1e-7));
    CHECK(b.omega_form <= b.simple);

    // decreasing in the pebble density
    double prev_s = 2.0, prev_o = 2.0;
    for (double a : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
        DistanceBound d = distance_unpebblable_bound(1000, 3, a);
        CHECK(d.simple <= prev_s + 1e-15);
        CHECK(d.omega_form <= prev_o + 1e-15);
        prev_s = d.simple;
        prev_o = d.omega_form;
    }
    // saturates to the trivial bound at low density
    DistanceBound t = distance_unpebblable_bound(1000, 3, 0.25);
    CHECK(t.simple == 1.0);
    CHECK(t.omega_form == 1.0);

    CHECK_THROWS_AS(distance_unpebblable_bound(5, 1, 1.0), PreconditionError);
    CHECK_THROWS_AS(distance_unpebblable_bound(5, 2, 0.0), PreconditionError);
}

TEST_CASE("experiment drivers and fixed-format tables") {
    McOptions o;
    o.budget = 400'000;
    o.per_query_cap = 20'000;
    o.x_rtol = 0.02;

    ThresholdExperiment a = run_path_experiment(64, 31, o);
    CHECK(a.label == "path:64");
    CHECK(a.prediction_total == doctest::Approx(387.9437123228).epsilon(1e-10));
    CHECK(a.measured.value > 0.0);
    CHECK(a.ratio > 0.2);
    CHECK(a.ratio < 1.5);

    // identical inputs give byte-identical tables, whatever the worker count
    ThresholdExperiment b = run_path_experiment(64, 31, o);
    McOptions o3 = o;
    o3.workers = 3;
    ThresholdExperiment c = run_path_experiment(64, 31, o3);
    std::string csv_a = experiments_csv({a});
    CHECK(csv_a == experiments_csv({b}));
    CHECK(csv_a == experiments_csv({c}));
    CHECK(csv_a.substr(0, 6) == "label,");
    CHECK(csv_a.find("path:64,64,") != std::string::npos);

    BouquetKnobs k;
    k.l0 = 3;
    ThresholdExperiment d = run_bouquet_experiment(BouquetSpec{512, 1, 5}, 17, o, k);
    CHECK(d.label == "bouquet:512:1:5");
    CHECK(d.measured.value > 0.0);
    CHECK(d.ratio > 0.2);
    CHECK(d.ratio < 3.0);

    std::string gcsv = geolb_csv(geolb_scan({100}));
    CHECK(gcsv.substr(0, 6) == "n,p,q\n");
    CHECK(gcsv.find("100,0.923143280505") != std::string::npos);
    CHECK(gcsv.find(",0.552972482001") != std::string::npos);

    BouquetKnobs sk;
    sk.g0 = 4;
    sk.l0 = 2;
    std::string scsv = spectrum_csv(spectrum_scan(65536, 3, sk));
    CHECK(scsv.substr(0, 7) == "target,");
    CHECK(scsv.find("short-arms") != std::string::npos);
    CHECK(scsv.find("long-arms") != std::string::npos);
}
