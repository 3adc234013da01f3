#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pebblex/graphs.hpp"
#include "pebblex/thresholds.hpp"

namespace pebblex {

/// phi(a) = a^2 / (2a + 1), a strictly increasing bijection on [0, inf).
double phi(double alpha);
/// Its inverse, y + sqrt(y^2 + y).
double phi_inv(double y);

/// Predicted geometric pebbling threshold of the n-path, total-pebbles
/// scale: e 2^{sqrt(log2 n)} n / sqrt(log2 n).  Needs n >= 2.
double path_threshold_prediction(long long n);

/// Operating constants for the bouquet predictions.  The closed forms hold
/// "for large enough" arm counts and lengths; these knobs say where we are
/// willing to apply them.
struct BouquetKnobs {
    long long g0 = 65536;  // smallest arm count for the long-arm form
    int l0 = 8;            // arm-length margin for the short-arm form
    double epsilon = 0.5;
    double k_factor = 8.0; // spectrum slack: predicted/target within [1/k, k]
};

struct BouquetPrediction {
    double beta = 0.0;  // per-vertex mean at the threshold
    double total = 0.0; // beta * n
    double band_low = 0.0;
    double band_high = 0.0;
    const char* regime = "";
};

/// Long arms: needs g >= g0, 2 g L <= n, and L - log2 n within
/// [sqrt(2 log2 g), exp((2 log2 g)^{1/4})].  beta = 2^{sqrt(2 log2 g)} e /
/// (2 sqrt(log2 g)), slack factor (1 + eta)^{-1} with |eta| <= (log2 g)^{-1/4}.
BouquetPrediction bouquet_prediction_large_g(const BouquetSpec& b, const BouquetKnobs& k = {});

/// Short arms: needs 2 g L <= epsilon n and l0 <= L <= log2 n - l0.
/// beta solves phi(beta) = 2^{L-1}/n, slack factor (1 + eta), |eta| <= epsilon.
BouquetPrediction bouquet_prediction_small(const BouquetSpec& b, const BouquetKnobs& k = {});

struct ThresholdExperiment {
    std::string label;
    long long n = 0;
    double prediction_total = 0.0;
    double band_low = 0.0;
    double band_high = 0.0;
    ThresholdEstimate measured;
    double ratio = 0.0; // measured / prediction
};

ThresholdExperiment run_path_experiment(long long n, std::uint64_t seed,
                                        const McOptions& opts = {});
ThresholdExperiment run_bouquet_experiment(const BouquetSpec& b, std::uint64_t seed,
                                           const McOptions& opts = {},
                                           const BouquetKnobs& knobs = {});

/// Targets a bouquet construction can hit at this vertex count:
/// sqrt(n) .. 2^{sqrt(2 log2 n)} n / sqrt(log2 n).
struct SpectrumRange {
    double low = 0.0;
    double high = 0.0;
};
SpectrumRange spectrum_target_range(long long n);

/// What any connected graph's geometric pebbling threshold must satisfy:
/// sqrt(n log 2) .. 2^{sqrt(2 log2 n)} e n / (2 sqrt(log2 n)) inflated by
/// (1 - (log2 n)^{-1/4})^{-1}.  Needs n >= 3.
SpectrumRange global_threshold_bounds(long long n);

/// Bouquet shape whose predicted threshold lands within k_factor of the
/// requested target.
struct SpectrumPlan {
    bool feasible = false;
    std::string reason;
    long long g = 0;
    long long L = 0;
    const char* regime = "";
    double predicted_total = 0.0;
    double target_total = 0.0;
    double ratio = 0.0; // predicted / target
};

SpectrumPlan spectrum_construct(long long n, double target_total, const BouquetKnobs& k = {});
std::vector<SpectrumPlan> spectrum_scan(long long n, int grid, const BouquetKnobs& k = {});

/// The cheap unsolvability event behind the global lower bound: no vertex
/// holds two pebbles and some vertex holds none.  q is its exact probability
/// under the geometric model at p = (1 + sqrt(log 2 / n))^{-1}.
struct GeolbRow {
    long long n = 0;
    double p = 0.0;
    double q = 0.0;
};
GeolbRow geolb_row(long long n);
std::vector<GeolbRow> geolb_scan(const std::vector<long long>& ns);

/// Bound on P(v unpebblable) when every vertex sits within distance d of v:
/// (e (2^{d-1} + k - 1) / (k (1 + phi(alpha))))^k with k = ceil(n^{1/d} - 1),
/// plus the sharper exponential-moment form it came from.
struct DistanceBound {
    long long k = 0;
    double simple = 1.0;
    double omega_form = 1.0;
};
DistanceBound distance_unpebblable_bound(long long n, long long d, double alpha);

/// CSV renderings with fixed column order and %.17g floats, so identical
/// inputs give byte-identical files.
std::string experiments_csv(const std::vector<ThresholdExperiment>& rows);
std::string geolb_csv(const std::vector<GeolbRow>& rows);
std::string spectrum_csv(const std::vector<SpectrumPlan>& rows);

} // namespace pebblex
