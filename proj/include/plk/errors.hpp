#pragma once

#include <stdexcept>
#include <string>

namespace plk {

// Requested object is too large to build (enumeration, dense matrix, ...).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact integer arithmetic left its guaranteed range.
class OverflowError : public std::overflow_error {
public:
    using std::overflow_error::overflow_error;
};

// Inputs outside an operation's documented domain.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A modelling assumption (e.g. risk-prediction preconditions) does not hold.
class AssumptionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-finite accumulation, failed factorization.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace plk
