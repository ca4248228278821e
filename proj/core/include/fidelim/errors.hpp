// errors.hpp — exception types shared across the library

#pragma once

#include <stdexcept>
#include <string>

namespace fidelim {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Two instantaneous levels closer than the degeneracy threshold; the
// instantaneous ground state is ill-posed there.
struct GapClosureError : Error {
    explicit GapClosureError(const std::string& msg) : Error(msg) {}
};

// Iterative eigensolver failed to converge.
struct NonConvergenceError : Error {
    explicit NonConvergenceError(const std::string& msg) : Error(msg) {}
};

// Integrator exhausted its refinement budget without meeting tolerance.
struct NoConvergenceError : Error {
    explicit NoConvergenceError(const std::string& msg) : Error(msg) {}
};

// Requested dense dimension exceeds the backend limit.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

// Argument outside its mathematical domain.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// State vector norm deviates too far from one.
struct NormError : Error {
    explicit NormError(const std::string& msg) : Error(msg) {}
};

// A scanned curve never crosses the requested level.
struct NoCrossingError : Error {
    explicit NoCrossingError(const std::string& msg) : Error(msg) {}
};

// Band area is exactly zero, so area ratios are undefined.
struct DegenerateAreaError : Error {
    explicit DegenerateAreaError(const std::string& msg) : Error(msg) {}
};

// Invalid configuration or model parameters.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace fidelim
