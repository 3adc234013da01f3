#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace pebblex {

// value = m * 2^e with |m| in [1,2) (or m == 0).  The hypoexponential series
// walks through terms like y^c/c! * 2^{-i(i+1)/2} whose magnitudes leave the
// double range in both directions long before the final sum does.
struct ScaledFloat {
    double m = 0.0;
    std::int64_t e = 0;

    static ScaledFloat zero() { return {}; }

    static ScaledFloat from_double(double x) {
        ScaledFloat s;
        if (x == 0.0) return s;
        int k;
        s.m = 2.0 * std::frexp(x, &k);
        s.e = k - 1;
        return s;
    }

    /// Build from natural-log magnitude and sign.  sign in {-1, 0, +1}.
    static ScaledFloat from_log_sign(double ln_abs, int sign) {
        if (sign == 0 || std::isinf(ln_abs)) return {};
        // split of ln2 keeps e*ln2 exact for |e| up to ~2^11
        constexpr double LN2_HI = 6.93147180369123816490e-01;
        constexpr double LN2_LO = 1.90821492927058770002e-10;
        double e2 = std::nearbyint(ln_abs / M_LN2);
        double r = (ln_abs - e2 * LN2_HI) - e2 * LN2_LO;
        ScaledFloat s = from_double(sign * std::exp(r));
        s.e += static_cast<std::int64_t>(e2);
        return s;
    }

    bool is_zero() const { return m == 0.0; }
    int sign() const { return m > 0 ? 1 : (m < 0 ? -1 : 0); }

    ScaledFloat mul_pow2(std::int64_t k) const {
        if (is_zero()) return {};
        ScaledFloat s = *this;
        s.e += k;
        return s;
    }

    friend ScaledFloat operator*(const ScaledFloat& a, const ScaledFloat& b) {
        if (a.is_zero() || b.is_zero()) return {};
        ScaledFloat s = from_double(a.m * b.m);
        s.e += a.e + b.e;
        return s;
    }

    friend ScaledFloat operator*(const ScaledFloat& a, double x) {
        return a * from_double(x);
    }

    friend ScaledFloat operator+(const ScaledFloat& a, const ScaledFloat& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        const ScaledFloat& big = (a.e >= b.e) ? a : b;
        const ScaledFloat& sml = (a.e >= b.e) ? b : a;
        std::int64_t de = big.e - sml.e;
        if (de > 64) return big;
        ScaledFloat s = from_double(big.m + std::ldexp(sml.m, -static_cast<int>(de)));
        s.e += big.e;
        return s;
    }

    friend ScaledFloat operator-(const ScaledFloat& a, const ScaledFloat& b) {
        ScaledFloat nb = b;
        nb.m = -nb.m;
        return a + nb;
    }

    /// Saturates: underflow -> 0, overflow -> +-inf.
    double to_double() const {
        if (is_zero()) return 0.0;
        if (e > 1100) return m > 0 ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
        if (e < -1100) return 0.0;
        return std::ldexp(m, static_cast<int>(e));
    }

    /// Natural log of |value|; -inf for zero.
    double log_abs() const {
        if (is_zero()) return -std::numeric_limits<double>::infinity();
        constexpr double LN2_HI = 6.93147180369123816490e-01;
        constexpr double LN2_LO = 1.90821492927058770002e-10;
        double de = static_cast<double>(e);
        return (std::log(std::fabs(m)) + de * LN2_LO) + de * LN2_HI;
    }
};

} // namespace pebblex
