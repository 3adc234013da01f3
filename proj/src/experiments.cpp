#include "pebblex/experiments.hpp"

#include <cmath>
#include <cstdio>

#include "pebblex/errors.hpp"
#include "pebblex/multiset_dist.hpp"

namespace pebblex {

double phi(double alpha) {
    if (!(alpha >= 0.0)) throw PreconditionError("phi needs alpha >= 0");
    return alpha * alpha / (2.0 * alpha + 1.0);
}

double phi_inv(double y) {
    if (!(y >= 0.0)) throw PreconditionError("phi_inv needs y >= 0");
    return y + std::sqrt(y * y + y);
}

double path_threshold_prediction(long long n) {
    if (n < 2) throw PreconditionError("path prediction needs n >= 2");
    double l = std::log2(static_cast<double>(n));
    return M_E * std::exp2(std::sqrt(l)) * static_cast<double>(n) / std::sqrt(l);
}

BouquetPrediction bouquet_prediction_large_g(const BouquetSpec& b, const BouquetKnobs& k) {
    b.validate();
    if (b.g < k.g0) throw PreconditionError("long-arm form needs g >= g0");
    if (2 * b.g * b.L > b.n) throw PreconditionError("long-arm form needs 2 g L <= n");
    double lg = std::log2(static_cast<double>(b.g));
    double excess = static_cast<double>(b.L) - std::log2(static_cast<double>(b.n));
    if (!(excess >= std::sqrt(2.0 * lg) && excess <= std::exp(std::pow(2.0 * lg, 0.25))))
        throw PreconditionError("long-arm form needs L - log2 n within its window");
    BouquetPrediction out;
    out.beta = std::exp2(std::sqrt(2.0 * lg)) * M_E / (2.0 * std::sqrt(lg));
    out.total = out.beta * static_cast<double>(b.n);
    double eta = std::pow(lg, -0.25);
    out.band_low = out.total / (1.0 + eta);
    out.band_high = out.total / (1.0 - eta);
    out.regime = "long-arms";
    return out;
}

BouquetPrediction bouquet_prediction_small(const BouquetSpec& b, const BouquetKnobs& k) {
    b.validate();
    if (!(k.epsilon > 0.0 && k.epsilon < 1.0)) throw PreconditionError("epsilon must lie in (0,1)");
    if (2.0 * static_cast<double>(b.g) * static_cast<double>(b.L) >
        k.epsilon * static_cast<double>(b.n))
        throw PreconditionError("short-arm form needs 2 g L <= epsilon n");
    double ln2n = std::log2(static_cast<double>(b.n));
    if (!(b.L >= k.l0 && static_cast<double>(b.L) <= ln2n - k.l0))
        throw PreconditionError("short-arm form needs l0 <= L <= log2 n - l0");
    BouquetPrediction out;
    out.beta = phi_inv(std::ldexp(1.0, static_cast<int>(b.L - 1)) / static_cast<double>(b.n));
    out.total = out.beta * static_cast<double>(b.n);
    out.band_low = out.total * (1.0 - k.epsilon);
    out.band_high = out.total * (1.0 + k.epsilon);
    out.regime = "short-arms";
    return out;
}

ThresholdExperiment run_path_experiment(long long n, std::uint64_t seed, const McOptions& opts) {
    ThresholdExperiment ex;
    ex.label = "path:" + std::to_string(n);
    ex.n = n;
    ex.prediction_total = path_threshold_prediction(n);
    ex.band_low = ex.prediction_total / 3.0;
    ex.band_high = ex.prediction_total * 3.0;
    ex.measured = geometric_threshold(solvability_family(make_path(n)), seed, opts);
    ex.ratio = ex.measured.value / ex.prediction_total;
    return ex;
}

ThresholdExperiment run_bouquet_experiment(const BouquetSpec& b, std::uint64_t seed,
                                           const McOptions& opts, const BouquetKnobs& knobs) {
    ThresholdExperiment ex;
    ex.label = "bouquet:" + std::to_string(b.n) + ":" + std::to_string(b.g) + ":" +
               std::to_string(b.L);
    ex.n = b.n;
    BouquetPrediction pred;
    try {
        pred = bouquet_prediction_large_g(b, knobs);
    } catch (const PreconditionError&) {
        pred = bouquet_prediction_small(b, knobs);
    }
    ex.prediction_total = pred.total;
    ex.band_low = pred.band_low;
    ex.band_high = pred.band_high;
    ex.measured = geometric_threshold(bouquet_solvability_family(b), seed, opts);
    ex.ratio = ex.measured.value / ex.prediction_total;
    return ex;
}

SpectrumRange spectrum_target_range(long long n) {
    if (n < 2) throw PreconditionError("needs n >= 2");
    double nd = static_cast<double>(n);
    double l = std::log2(nd);
    return {std::sqrt(nd), std::exp2(std::sqrt(2.0 * l)) * nd / std::sqrt(l)};
}

SpectrumRange global_threshold_bounds(long long n) {
    if (n < 3) throw PreconditionError("needs n >= 3");
    double nd = static_cast<double>(n);
    double l = std::log2(nd);
    double ub = std::exp2(std::sqrt(2.0 * l)) * M_E / (2.0 * std::sqrt(l)) * nd /
                (1.0 - std::pow(l, -0.25));
    return {std::sqrt(nd * M_LN2), ub};
}

namespace {

double large_g_beta(long long g) {
    double lg = std::log2(static_cast<double>(g));
    return std::exp2(std::sqrt(2.0 * lg)) * M_E / (2.0 * std::sqrt(lg));
}

} // namespace

SpectrumPlan spectrum_construct(long long n, double target_total, const BouquetKnobs& k) {
    if (n < 2) throw PreconditionError("needs n >= 2");
    double nd = static_cast<double>(n);
    double l2n = std::log2(nd);
    if (nd < std::exp2(2.0 * k.l0) || std::floor(nd / (4.0 * l2n)) < static_cast<double>(k.g0))
        throw PreconditionError("n too small for these knobs");

    SpectrumPlan plan;
    plan.target_total = target_total;
    SpectrumRange range = spectrum_target_range(n);
    if (!(target_total >= range.low && target_total <= range.high)) {
        plan.reason = "target outside the attainable range";
        return plan;
    }

    double beta = target_total / nd;
    double beta_c = large_g_beta(k.g0);
    if (beta < beta_c) {
        plan.regime = "short-arms";
        plan.g = 1;
        double h = 1.0 + std::log2(phi(beta) * nd);
        if (h < k.l0) plan.L = k.l0;
        else if (h <= l2n - k.l0) plan.L = static_cast<long long>(std::floor(h));
        else plan.L = static_cast<long long>(std::floor(l2n)) - k.l0;
        plan.predicted_total = phi_inv(std::ldexp(1.0, static_cast<int>(plan.L - 1)) / nd) * nd;
    } else {
        plan.regime = "long-arms";
        long long g_hi = static_cast<long long>(std::floor(nd / (4.0 * l2n)));
        // largest arm count whose closed-form threshold stays under the target
        long long lo = k.g0, hi = g_hi;
        while (lo < hi) {
            long long mid = lo + (hi - lo + 1) / 2;
            if (large_g_beta(mid) <= beta) lo = mid;
            else hi = mid - 1;
        }
        plan.g = lo;
        plan.L = static_cast<long long>(std::ceil(l2n + std::sqrt(2.0 * std::log2(static_cast<double>(plan.g)))));
        plan.predicted_total = large_g_beta(plan.g) * nd;
        if (2 * plan.g * plan.L > n) {
            while (plan.g > k.g0 && 2 * plan.g * plan.L > n) --plan.g;
            plan.L = static_cast<long long>(std::ceil(l2n + std::sqrt(2.0 * std::log2(static_cast<double>(plan.g)))));
            plan.predicted_total = large_g_beta(plan.g) * nd;
            plan.reason = "arm count reduced to keep 2 g L <= n";
        }
    }
    plan.ratio = plan.predicted_total / target_total;
    if (plan.ratio >= 1.0 / k.k_factor && plan.ratio <= k.k_factor) {
        plan.feasible = true;
    } else if (plan.reason.empty()) {
        plan.reason = "construction misses the target by more than the slack factor";
    }
    return plan;
}

std::vector<SpectrumPlan> spectrum_scan(long long n, int grid, const BouquetKnobs& k) {
    if (grid < 2) throw PreconditionError("grid needs at least two points");
    SpectrumRange range = spectrum_target_range(n);
    std::vector<SpectrumPlan> plans;
    plans.reserve(static_cast<std::size_t>(grid));
    double step = std::log(range.high / range.low) / static_cast<double>(grid - 1);
    for (int i = 0; i < grid; ++i) {
        // pin the ends: exp/log round-trip can drift an ulp past range.high
        double target = i == 0          ? range.low
                        : i == grid - 1 ? range.high
                                        : range.low * std::exp(step * i);
        plans.push_back(spectrum_construct(n, target, k));
    }
    return plans;
}

GeolbRow geolb_row(long long n) {
    if (n < 1) throw PreconditionError("needs n >= 1");
    GeolbRow row;
    row.n = n;
    double nd = static_cast<double>(n);
    double e = std::sqrt(M_LN2 / nd);
    row.p = 1.0 / (1.0 + e);
    double q0 = 1.0 - row.p; // P(at least one pebble)
    // P(all vertices hold <= 1) - P(all hold exactly 1)
    row.q = std::exp(nd * std::log1p(-q0 * q0)) - std::exp(nd * std::log(row.p * q0));
    return row;
}

std::vector<GeolbRow> geolb_scan(const std::vector<long long>& ns) {
    std::vector<GeolbRow> rows;
    rows.reserve(ns.size());
    for (long long n : ns) rows.push_back(geolb_row(n));
    return rows;
}

DistanceBound distance_unpebblable_bound(long long n, long long d, double alpha) {
    if (n < 2) throw PreconditionError("needs n >= 2");
    if (d < 2 || d > 200) throw PreconditionError("needs 2 <= d <= 200");
    if (!(alpha > 0.0)) throw PreconditionError("needs alpha > 0");
    DistanceBound out;
    double root = std::exp(std::log(static_cast<double>(n)) / static_cast<double>(d));
    out.k = static_cast<long long>(std::ceil(root - 1.0));
    if (out.k < 1) out.k = 1;
    double kd = static_cast<double>(out.k);
    double flips = std::ldexp(1.0, static_cast<int>(d - 1)) + kd - 1.0;
    double denom = kd * (1.0 + phi(alpha));
    double log_simple = kd * (1.0 + std::log(flips) - std::log(denom));
    out.simple = log_simple >= 0.0 ? 1.0 : std::exp(log_simple);
    if (denom <= flips) {
        out.omega_form = 1.0; // the moment bound gives nothing here
        return out;
    }
    double p = 1.0 / (1.0 + phi(alpha));
    double pp = kd / flips;
    double omega = pp * std::log(pp / p) + (1.0 - pp) * std::log((1.0 - pp) / (1.0 - p));
    double lo = -flips * omega;
    out.omega_form = lo >= 0.0 ? 1.0 : std::exp(lo);
    return out;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::string experiments_csv(const std::vector<ThresholdExperiment>& rows) {
    std::string out =
        "label,n,prediction,band_low,band_high,measured,ci_low,ci_high,samples,seed,ratio,budget_exhausted\n";
    for (const auto& r : rows) {
        out += r.label + ',' + std::to_string(r.n) + ',' + fmt_double(r.prediction_total) + ',' +
               fmt_double(r.band_low) + ',' + fmt_double(r.band_high) + ',' +
               fmt_double(r.measured.value) + ',' + fmt_double(r.measured.ci_low) + ',' +
               fmt_double(r.measured.ci_high) + ',' + std::to_string(r.measured.samples_used) +
               ',' + std::to_string(r.measured.seed) + ',' + fmt_double(r.ratio) + ',' +
               (r.measured.budget_exhausted ? "1" : "0") + '\n';
    }
    return out;
}

std::string geolb_csv(const std::vector<GeolbRow>& rows) {
    std::string out = "n,p,q\n";
    for (const auto& r : rows)
        out += std::to_string(r.n) + ',' + fmt_double(r.p) + ',' + fmt_double(r.q) + '\n';
    return out;
}

std::string spectrum_csv(const std::vector<SpectrumPlan>& rows) {
    std::string out = "target,feasible,g,L,regime,predicted,ratio,reason\n";
    for (const auto& r : rows) {
        out += fmt_double(r.target_total) + ',' + (r.feasible ? "1" : "0") + ',' +
               std::to_string(r.g) + ',' + std::to_string(r.L) + ',' + r.regime + ',' +
               fmt_double(r.predicted_total) + ',' + fmt_double(r.ratio) + ',' + r.reason + '\n';
    }
    return out;
}

} // namespace pebblex
