#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A cube or Haar function needs more resolution than the tree has.
class DepthExceeded : public Error {
public:
    using Error::Error;
};

/// Two objects were built against different trees.
class ParamsMismatch : public Error {
public:
    using Error::Error;
};

/// Dense materialization was requested above the configured cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

/// A coefficient or multiplier is larger than its admissible bound.
class BoundViolation : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace dyadic
