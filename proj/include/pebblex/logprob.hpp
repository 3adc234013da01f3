#pragma once

#include <cmath>
#include <limits>

namespace pebblex {

/// Probability carried as its natural logarithm; zero is -inf.  Magnitudes
/// like 2^{-c(c+1)/2} fall far below the smallest double, so deep-tail
/// results are exchanged in this form.
struct LogProb {
    double log_value = -std::numeric_limits<double>::infinity();

    static LogProb from_log(double lv) { return LogProb{lv}; }
    static LogProb from_prob(double p) {
        return LogProb{p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity()};
    }
    static LogProb zero() { return LogProb{}; }

    bool is_zero() const { return std::isinf(log_value) && log_value < 0; }
    double value() const { return std::exp(log_value); }

    friend bool operator<(const LogProb& a, const LogProb& b) { return a.log_value < b.log_value; }
    friend bool operator<=(const LogProb& a, const LogProb& b) { return a.log_value <= b.log_value; }
};

} // namespace pebblex
