#pragma once

#include <stdexcept>

namespace unifed {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured capacity limit.
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or contract-violating input data; the message carries
// file/row/class context.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rank-deficient design matrix.
class DesignError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Iterative procedure failed to reach a usable state.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace unifed
