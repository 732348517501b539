#pragma once

#include <stdexcept>
#include <string>

namespace uprop {

/// Invalid arguments or configuration: bad parameters, malformed config,
/// unsupported combinations. Maps to exit/status code 2.
class ArgumentError : public std::invalid_argument {
public:
    explicit ArgumentError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical failure during computation: non-finite propagation, singular
/// divisors, non-convergent quadrature. Maps to exit/status code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem / parse failures on external files.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace uprop
