#pragma once

#include <cmath>
#include <cstdint>

namespace pebblex {

struct WilsonInterval {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes out of n at normal quantile z.
inline WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
    if (n == 0) return {};
    double nn = static_cast<double>(n);
    double p = static_cast<double>(k) / nn;
    double z2 = z * z;
    double denom = 1.0 + z2 / nn;
    double center = (p + z2 / (2.0 * nn)) / denom;
    double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    WilsonInterval w;
    w.p_hat = p;
    w.lo = center - half;
    w.hi = center + half;
    if (w.lo < 0.0) w.lo = 0.0;
    if (w.hi > 1.0) w.hi = 1.0;
    return w;
}

// two-sided normal quantiles
constexpr double Z_95 = 1.959963984540054;    // alpha = 0.05
constexpr double Z_99 = 2.5758293035489004;   // alpha = 0.01

/// Standard normal quantile (Acklam's rational approximation, |error| < 1.2e-9).
inline double inverse_normal_cdf(double p) {
    if (!(p > 0.0 && p < 1.0)) return p <= 0.0 ? -HUGE_VAL : HUGE_VAL;
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Quantile for a two-sided test at level alpha.
inline double two_sided_z(double alpha) {
    return inverse_normal_cdf(1.0 - alpha / 2.0);
}

} // namespace pebblex
