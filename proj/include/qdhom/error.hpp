#pragma once

#include <stdexcept>
#include <string>

namespace qdhom {

// Input that violates a documented precondition or physical invariant.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Integrator budget exceeded, fit did not converge, or a grid is entirely infeasible.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qdhom
