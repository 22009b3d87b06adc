#pragma once

#include <stdexcept>

namespace levyforage {

// Invalid numeric parameters: law exponents, drift magnitude, dimensions.
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Bad scenario or config input: unknown keys, out-of-range values, malformed files.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Not enough samples or groups to run an estimator.
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace levyforage
