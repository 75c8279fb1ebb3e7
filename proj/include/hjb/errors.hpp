#pragma once

#include <stdexcept>
#include <string>

namespace hjb {

// Bad inputs: invalid grids, malformed coefficients, missing parameters.
// The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runtime failures of the numerics: non-convergence, CFL rejection, blow-up.
// The CLI maps these to exit code 1.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

}  // namespace hjb
