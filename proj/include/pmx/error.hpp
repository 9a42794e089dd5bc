#pragma once

#include <stdexcept>
#include <string>

namespace pmx {

// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments or violated preconditions.
class ParameterError : public Error {
public:
    using Error::Error;
};

// An iterative or randomized procedure ran out of budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Input too large for an exhaustive or dense routine.
class GuardError : public Error {
public:
    using Error::Error;
};

// Malformed file contents.
class FormatError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace pmx
