#pragma once

#include <stdexcept>
#include <string>

namespace thullen {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point lies outside the open domain, or a parameter leaves its admissible set.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A caller-side precondition was violated (bad levels, bad exponents, mismatched inputs).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Overflow, underflow or a nonfinite intermediate that would otherwise be silently saturated.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace thullen
