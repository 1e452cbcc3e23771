#pragma once

#include <stdexcept>
#include <string>

namespace lambda_lab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition or invariant (CLI exit code 2).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed to reach its tolerance (CLI exit code 3).
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace lambda_lab
