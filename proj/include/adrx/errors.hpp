#pragma once

#include <stdexcept>
#include <string>

namespace adrx {

// Bad parameter values or inconsistent configuration (e.g. transmitter inside
// the receiver). The message names the offending field.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed config file or command line input.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature could not reach the requested tolerance within its
// panel or truncation budget.
class QuadratureFailure : public std::runtime_error {
public:
    explicit QuadratureFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical Laplace inversion failed its internal consistency check.
class ConvergenceFailure : public std::runtime_error {
public:
    explicit ConvergenceFailure(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometry queries on segments that do not actually cross the sphere.
class NoIntersection : public std::runtime_error {
public:
    explicit NoIntersection(const std::string& msg) : std::runtime_error(msg) {}
};

// Degenerate geometric input (zero-length segment and similar).
class Degenerate : public std::runtime_error {
public:
    explicit Degenerate(const std::string& msg) : std::runtime_error(msg) {}
};

// A molecule-count invariant broke during a simulation step; indicates a bug,
// never a user error.
class StateCorruption : public std::logic_error {
public:
    explicit StateCorruption(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace adrx
