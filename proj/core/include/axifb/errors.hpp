#pragma once

#include <stdexcept>
#include <string>

namespace axifb {

// Bad arguments: negative density, heights outside the admissible range, ...
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Balls or supports leaving the grid.
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root finding or descent that did not converge.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual(residual) {}
    double residual;
};

// Supersonic data: no root on the subsonic branch.
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Root exists but sits within eps0 of the critical density.
struct SubsonicityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace axifb
