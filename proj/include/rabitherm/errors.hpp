#pragma once

#include <stdexcept>
#include <string>

namespace rabitherm {

// Integration or root finding failed to meet its tolerance.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input sits on the ω = Ω boundary where a one-sided formula is singular.
class RegimeBoundaryError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A tridiagonal generator has a vanishing link, so the null space is not one-dimensional.
class ReducibleGeneratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A finite-difference classification fell below its noise floor.
class InconclusiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rabitherm
