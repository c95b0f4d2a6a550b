#pragma once

#include <stdexcept>

namespace tvbo {

// Invalid experiment configuration; maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical degeneracy (failed factorization, non-finite log-determinant,
// non-converging solver); maps to CLI exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tvbo
