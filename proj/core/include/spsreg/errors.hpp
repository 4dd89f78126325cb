#ifndef SPSREG_ERRORS_HPP
#define SPSREG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spsreg {

// Invalid user-supplied configuration (bad JSON, inconsistent sizes, out-of-range
// hyper-parameters).  The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure at runtime (singular regressor matrix, unbounded dual where a
// finite value is required, inconsistent set-membership datum, non-convergence).
// The CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace spsreg

#endif
