#pragma once

#include <stdexcept>
#include <string>

#include "corrdyn/sphere.hpp"

namespace corrdyn {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid input: degenerate maps, violated preconditions, bad schemas.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iteration failed to reach tolerance; carries the best estimate found.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double residual)
        : Error(what), residual(residual) {}
    double residual;
};

// Schwarz reflection queried outside the closure of the quadrature domain.
class OutsideDomainError : public Error {
public:
    using Error::Error;
};

// Preimage selection near the unit circle was ambiguous; both candidates kept.
class AmbiguousPreimageError : public Error {
public:
    AmbiguousPreimageError(const std::string& what, Cx a, Cx b)
        : Error(what), first(a), second(b) {}
    Cx first, second;
};

}  // namespace corrdyn
