#include "pebblex/hypoexp.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "pebblex/errors.hpp"
#include "pebblex/multiset_dist.hpp"
#include "pebblex/parallel.hpp"
#include "pebblex/scaled_float.hpp"
#include "pebblex/stats.hpp"

namespace pebblex {

namespace {

// compensated accumulator (Neumaier)
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double t = s + x;
        c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

} // namespace

double norm_const() {
    static const double n = [] {
        double prod = 1.0;
        for (int j = 1; j < 120; ++j) {
            double f = 1.0 / (1.0 - std::ldexp(1.0, -j));
            prod *= f;
            if (f - 1.0 < 1e-18) break;
        }
        return prod;
    }();
    return n;
}

double theta_nome() { return std::exp(-2.0 * M_PI * M_PI / M_LN2); }

double k_small_x() {
    static const double k = q_periodic(0.0) * theta4(0.0, theta_nome());
    return k;
}

double sample_y(Rng& rng, int terms) {
    if (terms < 1) throw PreconditionError("need at least one stage");
    double s = 0.0;
    for (int i = 0; i < terms; ++i) s += std::ldexp(-std::log(rng.next_unit()), -i);
    return s;
}

double cdf_partial(int n, double x) {
    if (n < 1 || n > 30) throw PreconditionError("stage count must lie in [1,30]");
    if (!(x > 0.0)) return 0.0;
    KahanSum acc;
    for (int i = 0; i < n; ++i) {
        double ri = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            ri *= std::ldexp(1.0, j) / (std::ldexp(1.0, j) - std::ldexp(1.0, i));
        }
        acc.add(-ri * std::expm1(-std::ldexp(x, i)));
    }
    double v = acc.get();
    return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
}

namespace {

// sum_{k>c} (-y)^k / k!, carried with an explicit power-of-two exponent since
// the leading magnitude y^{c+1}/(c+1)! leaves the double range long before
// the series itself matters.  ln_y must equal log(y) but stays finite when
// y itself overflows.
ScaledFloat ec_scaled(double y, double ln_y, long long c) {
    if (y == 0.0) return {};
    if (c == 0) return ScaledFloat::from_double(std::expm1(-y));
    if (y <= static_cast<double>(c) + 1.0) {
        // pull out the first tail term; the ratio series that remains is
        // alternating with ratios <= (c+1)/(c+2), so it never cancels badly
        double ln_lead = static_cast<double>(c + 1) * ln_y - std::lgamma(static_cast<double>(c) + 2.0);
        ScaledFloat lead = ScaledFloat::from_log_sign(ln_lead, (c + 1) % 2 == 0 ? 1 : -1);
        KahanSum inner;
        inner.add(1.0);
        double term = 1.0;
        for (long long j = 1; j < 200000; ++j) {
            term *= -y / static_cast<double>(c + 1 + j);
            inner.add(term);
            if (std::fabs(term) < 1e-22) break;
        }
        return lead * inner.get();
    }
    // e^{-y} minus the head sum, the head led by (-y)^c/c!
    ScaledFloat ex = y > 1.0e15 ? ScaledFloat{} : ScaledFloat::from_log_sign(-y, 1);
    double ln_lead = static_cast<double>(c) * ln_y - std::lgamma(static_cast<double>(c) + 1.0);
    ScaledFloat lead = ScaledFloat::from_log_sign(ln_lead, c % 2 == 0 ? 1 : -1);
    KahanSum inner;
    inner.add(1.0);
    double term = 1.0;
    double inv_y = y > 1.0e15 ? std::exp(-ln_y) : 1.0 / y;
    for (long long m = 1; m <= c; ++m) {
        term *= -static_cast<double>(c - m + 1) * inv_y;
        inner.add(term);
        if (std::fabs(term) < 1e-22) break;
    }
    return ex - lead * inner.get();
}

} // namespace

CdfValue cdf_limit_shifted(double x, int c) {
    if (c < 0 || c > 100000) throw PreconditionError("series shift must lie in [0,100000]");
    if (std::isnan(x)) throw PreconditionError("x must be a number");
    CdfValue out;
    out.series_shift = c;
    if (!(x > 0.0)) {
        out.method = "series";
        return out;
    }
    if (x >= 40.0) {
        // the upper tail is below norm_const * e^{-40} ~ 1.5e-17
        out.value = 1.0;
        out.log_value = LogProb::from_log(std::log1p(-std::fmin(1.0, norm_const() * std::exp(-x))));
        out.method = "saturated";
        return out;
    }

    double ln_x = std::log(x);
    double log2_x = std::log2(x);
    ScaledFloat sum;
    double tail_prod = 1.0 / norm_const(); // prod_{j>i} (1 - 2^{-j}) at i = 0
    int consecutive_small = 0;
    long long i_cap = 2ll * c + 700;
    bool converged = false;
    for (long long i = 0; i <= i_cap; ++i) {
        if (i > 0) tail_prod /= 1.0 - std::ldexp(1.0, static_cast<int>(-i));
        double y = (static_cast<double>(i) + log2_x <= 1020.0)
                       ? std::ldexp(x, static_cast<int>(i))
                       : std::numeric_limits<double>::infinity();
        double ln_y = static_cast<double>(i) * M_LN2 + ln_x;
        ScaledFloat term = ec_scaled(y, ln_y, c).mul_pow2(-i * (i + 1) / 2) * tail_prod;
        if (i % 2 == 0) term.m = -term.m; // sign (-1)^{i+1}
        sum = sum + term;
        bool small = term.is_zero() || (!sum.is_zero() && term.e < sum.e - 120);
        consecutive_small = small ? consecutive_small + 1 : 0;
        if (consecutive_small >= 3 && i > c) { converged = true; break; }
    }
    if (!converged) throw AccuracyError("series did not settle within its term cap");

    double nn = norm_const();
    ScaledFloat total = sum * (nn * nn);
    if (total.sign() <= 0) {
        // roundoff at an underflowing value
        out.value = 0.0;
        out.log_value = LogProb::zero();
    } else {
        double v = total.to_double();
        out.value = v > 1.0 ? 1.0 : v;
        out.log_value = LogProb::from_log(total.log_abs());
    }
    out.method = "series";
    return out;
}

CdfValue cdf_limit(double x) {
    if (std::isnan(x)) throw PreconditionError("x must be a number");
    if (!(x > 0.0)) return cdf_limit_shifted(0.0, 0);
    if (x >= 0.1) return cdf_limit_shifted(x, 0);
    // pick c near the peak of the term ladder: c' - log2(c') = -log2(x)
    double b = -std::log2(x);
    double cp = b + std::log2(b);
    for (int it = 0; it < 60; ++it) {
        double g = cp - std::log2(cp) - b;
        double step = g / (1.0 - 1.0 / (cp * M_LN2));
        cp -= step;
        if (std::fabs(step) < 1e-12 * cp) break;
    }
    long long c = static_cast<long long>(std::floor(cp));
    if (c < 1) c = 1;
    return cdf_limit_shifted(x, static_cast<int>(c));
}

double p_series(double z) {
    if (!(z > 0.0)) throw PreconditionError("needs z > 0");
    KahanSum acc;
    // j >= 0 leg
    for (int j = 0; j < 80; ++j) {
        double w = std::ldexp(z, j);
        double frac = w > 1.0e17 ? 1.0 : w / (w + 1.0);
        double mag = std::ldexp(frac, static_cast<int>(-static_cast<long long>(j) * (j + 1) / 2));
        double t = (j % 2 == 0) ? mag : -mag;
        acc.add(t);
        if (j > 2 && std::fabs(t) < 1e-22) break;
    }
    // j <= -1 leg, written with k = -j
    for (int k = 1; k < 80; ++k) {
        double w = std::ldexp(z, -k);
        double frac = w / (w + 1.0);
        double mag = std::ldexp(frac, static_cast<int>(-static_cast<long long>(k) * (k - 1) / 2));
        double t = (k % 2 == 0) ? mag : -mag;
        acc.add(t);
        if (k > 2 && std::fabs(t) < 1e-22) break;
    }
    return acc.get();
}

double q_periodic(double z) {
    double u = z - std::floor(z);
    return std::exp2(u * (u - 1.0) / 2.0) * p_series(std::exp2(u));
}

double theta4(double z, double q) {
    if (!(std::fabs(q) < 1.0)) throw PreconditionError("nome must satisfy |q| < 1");
    KahanSum acc;
    acc.add(1.0);
    double qp = 1.0;   // q^{i^2}
    double qodd = q;   // q^{2i+1}
    for (int i = 1; i < 10000; ++i) {
        qp *= qodd;
        qodd *= q * q;
        double t = 2.0 * qp * std::cos(2.0 * static_cast<double>(i) * z);
        acc.add(i % 2 == 0 ? t : -t);
        if (std::fabs(qp) < 1e-30) break;
    }
    return acc.get();
}

LogProb asymp_log_cdf(double c_prime) {
    if (!(c_prime >= 1.0)) throw PreconditionError("needs c' >= 1");
    double ln_n = std::log(norm_const());
    double lv = 2.0 * ln_n - 0.5 * std::log(2.0 * M_PI * c_prime) + c_prime -
                0.5 * c_prime * (c_prime + 1.0) * M_LN2 + std::log(q_periodic(c_prime));
    return LogProb::from_log(lv);
}

LogProb asymp_log_cdf2(double c2, double y) {
    if (!(c2 >= 6.0)) throw PreconditionError("needs c'' >= 6");
    double t = std::pow(c2, 0.25);
    double l2y = std::log2(y);
    if (!(l2y >= -t - 1e-9 && l2y <= t + 1e-9))
        throw PreconditionError("y must lie within the quarter-power window of c''");
    double ln_n = std::log(norm_const());
    double ln_y = std::log(y);
    double lv = 2.0 * ln_n - 0.5 * std::log(2.0 * M_PI * c2) + c2 -
                0.5 * c2 * (c2 + 1.0) * M_LN2 + c2 * ln_y + 0.5 * (1.0 - l2y) * ln_y +
                std::log(q_periodic(c2 - l2y));
    return LogProb::from_log(lv);
}

double tail_bound(double x) { return std::fmin(1.0, norm_const() * std::exp(-x)); }

ChiResult chi_weighted_sum(int levels, double p, double r, ChiMethod method,
                           std::uint64_t mc_samples, std::uint64_t seed,
                           std::uint64_t dp_cap, unsigned workers) {
    if (levels < 1 || levels > 62) throw PreconditionError("level count must lie in [1,62]");
    if (!(p > 0.0 && p <= 1.0)) throw PreconditionError("geometric p must lie in (0,1]");
    ChiResult out;
    if (!(r > 0.0)) {
        out.method = "exact";
        out.ci_low = out.ci_high = 0.0;
        return out;
    }
    if (p == 1.0) {
        out.value = out.ci_low = out.ci_high = 1.0;
        out.method = "exact";
        return out;
    }
    // integerize: sum_i Z_i 2^{L-i} < r 2^{L-1}, i.e. the weighted sum stays <= K
    double x_thresh = std::ldexp(r, levels - 1);
    if (!(x_thresh < 9.2e18)) throw PreconditionError("r 2^{L-1} too large to compare exactly");
    long long K = x_thresh == std::floor(x_thresh)
                      ? static_cast<long long>(x_thresh) - 1
                      : static_cast<long long>(std::floor(x_thresh));
    if (K < 0) {
        out.method = "exact";
        out.ci_low = out.ci_high = 0.0;
        return out;
    }

    bool exact = method == ChiMethod::Exact ||
                 (method == ChiMethod::Auto && static_cast<std::uint64_t>(K) + 1 <= dp_cap);
    if (exact) {
        if (static_cast<std::uint64_t>(K) + 1 > dp_cap)
            throw BudgetError("threshold too large for the exact pass");
        // in-place stage convolution: after stage i, f[s] = P(partial sum = s);
        // the geometric tail gives f[s] <- p f[s] + (1-p) f[s - w]
        std::vector<double> f(static_cast<std::size_t>(K) + 1, 0.0);
        f[0] = 1.0;
        for (int i = 1; i <= levels; ++i) {
            long long w = 1ll << (levels - i);
            for (long long s = 0; s <= K; ++s) {
                double carry = s >= w ? f[static_cast<std::size_t>(s - w)] : 0.0;
                f[static_cast<std::size_t>(s)] = p * f[static_cast<std::size_t>(s)] + (1.0 - p) * carry;
            }
        }
        KahanSum acc;
        for (double v : f) acc.add(v);
        double v = acc.get();
        out.value = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
        out.ci_low = out.ci_high = out.value;
        out.method = "exact";
        return out;
    }

    GeometricParams gp{p};
    int L = levels;
    std::uint64_t hits = parallel_count(Rng(seed), 0, mc_samples, workers,
                                        [&](Rng& rng, std::uint64_t) {
        long long s = 0;
        for (int i = 1; i <= L; ++i) {
            long long w = 1ll << (L - i);
            long long z = sample_geometric(gp, rng);
            if (z > (K - s) / w) return false;
            s += z * w;
        }
        return true;
    });
    WilsonInterval wi = wilson_interval(hits, mc_samples, Z_95);
    out.value = wi.p_hat;
    out.ci_low = wi.lo;
    out.ci_high = wi.hi;
    out.samples = mc_samples;
    out.method = "mc";
    return out;
}

double chi_upper_bound(int levels, double p, double r) {
    if (levels < 1) throw PreconditionError("level count must be >= 1");
    if (!(p > 0.0 && p < 1.0)) throw PreconditionError("needs p in (0,1)");
    if (!(r > 0.0)) throw PreconditionError("needs r > 0");
    double lambda = -std::log1p(-p);
    double head = cdf_limit((r + 3.0) * lambda).value;
    double tail = norm_const() * std::exp(-std::ldexp(lambda, levels));
    return std::fmin(1.0, head + tail);
}

} // namespace pebblex
