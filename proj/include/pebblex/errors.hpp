#pragma once

#include <stdexcept>
#include <string>

namespace pebblex {

/// Violated input contract: bad sizes, out-of-range parameters, malformed specs.
/// CLI maps this to exit code 2.
struct PreconditionError : std::invalid_argument {
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

/// A sample, state, or enumeration budget ran out before the answer was decided.
/// CLI maps this to exit code 3.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// The requested accuracy is unattainable at the given argument.
struct AccuracyError : std::runtime_error {
    explicit AccuracyError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace pebblex
