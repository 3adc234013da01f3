#pragma once

#include <cstdint>

#include "pebblex/logprob.hpp"
#include "pebblex/rng.hpp"

namespace pebblex {

/// Law of Y = sum_{i>=0} W_i / 2^i with W_i independent standard
/// exponentials: the limit of hypoexponential sums with rates 1, 2, 4, ...
/// Everything here is about its distribution function F and the matching
/// small-x asymptotics.

/// prod_{j>=1} 2^j / (2^j - 1) = 3.46274661945506...
double norm_const();
/// log-periodic nome exp(-2 pi^2 / log 2), about 4.29e-13
double theta_nome();
/// q_periodic(z) * theta4(pi z, theta_nome()), which is constant in z
double k_small_x();

double sample_y(Rng& rng, int terms = 64);

/// Exact CDF of the partial sum of the first n stages (1 <= n <= 30).
double cdf_partial(int n, double x);

struct CdfValue {
    double value = 0.0;   // clamped to [0,1]
    LogProb log_value;    // meaningful even when value underflows
    int series_shift = 0; // c used by the series
    const char* method = "";
};

/// CDF of the limit law.  Chooses the series shift automatically: the plain
/// alternating series for x >= 0.1, a factorially-recentred one below it.
CdfValue cdf_limit(double x);
/// Same series with an explicit shift c >= 0.
CdfValue cdf_limit_shifted(double x, int c);

/// P(z) = sum_{j in Z} (-1)^j 2^{-j(j+1)/2} (2^j z)/(2^j z + 1), z > 0;
/// satisfies P(z) = z P(2z).
double p_series(double z);
/// Q(z) = 2^{u(u-1)/2} P(2^u) with u = z mod 1; 1-periodic and even.
double q_periodic(double z);
/// Jacobi-style theta sum 1 + 2 sum_{i>=1} (-1)^i q^{i^2} cos(2 i z), |q| < 1.
double theta4(double z, double q);

/// log F(2^{c'} x ...) asymptotics: log of the small-argument law at the point
/// whose series shift is c' (c' >= 1).
LogProb asymp_log_cdf(double c_prime);
/// Two-parameter form, valid for c'' >= 6 and y within [2^-t, 2^t], t = c''^{1/4}.
LogProb asymp_log_cdf2(double c2, double y);

/// min(1, norm_const * exp(-x)): upper bound on the upper tail 1 - F(x).
double tail_bound(double x);

/// P(sum_{i=1..L} Z_i / 2^{i-1} < r) for iid geometrics with parameter p.
struct ChiResult {
    double value = 0.0;
    double ci_low = 0.0;
    double ci_high = 1.0;
    std::uint64_t samples = 0;
    const char* method = "";
};

enum class ChiMethod { Auto, Exact, MonteCarlo };

ChiResult chi_weighted_sum(int levels, double p, double r,
                           ChiMethod method = ChiMethod::Auto,
                           std::uint64_t mc_samples = 1'000'000,
                           std::uint64_t seed = 1,
                           std::uint64_t dp_cap = 10'000'000,
                           unsigned workers = 1);

/// Closed-form upper bound on the same probability:
/// F((r+3) lambda) + norm_const exp(-2^L lambda), lambda = -log(1-p).
double chi_upper_bound(int levels, double p, double r);

} // namespace pebblex
