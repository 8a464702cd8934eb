#pragma once

#include <stdexcept>
#include <string>

namespace fuzzyfp {

// Bad arguments, malformed configuration, violated preconditions.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature that does not converge, iterations that do not settle,
// non-finite intermediate values.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fuzzyfp
