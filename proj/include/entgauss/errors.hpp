#pragma once

#include <stdexcept>
#include <string>

namespace entgauss {

// Raised when an iterative evaluation exceeds its term/iteration budget or a
// quadrature cannot certify the requested tolerance.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a root bracket cannot be established.
class BracketError : public ConvergenceError {
public:
    explicit BracketError(const std::string& what) : ConvergenceError(what) {}
};

}  // namespace entgauss
