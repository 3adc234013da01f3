#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "pebblex/errors.hpp"

namespace pebblex {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Exact C(n, k); zero when k < 0 or k > n.  n must be >= 0.
inline BigInt binomial(long long n, long long k) {
    if (n < 0) throw PreconditionError("binomial: negative upper argument");
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= (n - k + i);
        r /= i;
    }
    return r;
}

inline double to_double(const Rational& r) {
    return r.template convert_to<double>();
}

} // namespace pebblex
