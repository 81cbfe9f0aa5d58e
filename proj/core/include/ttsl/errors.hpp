#pragma once

#include <stdexcept>
#include <string>

namespace ttsl {

/// Malformed or inconsistent input data (files, datasets, shapes on load).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (eigen-solve breakdown, infeasible starting point, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ttsl
