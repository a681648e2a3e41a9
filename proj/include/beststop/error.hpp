#pragma once

#include <stdexcept>
#include <string>

namespace beststop {

// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

// Precondition of a partial map violated (e.g. phi with N in last position).
class DomainError : public Error {
public:
    using Error::Error;
};

// Resource guard tripped: class too large to enumerate or tree too deep.
class LimitError : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

// Threshold table queried beyond the depth it was computed to.
class DepthError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

class InconsistencyError : public Error {
public:
    using Error::Error;
};

class IncompleteStrategy : public Error {
public:
    using Error::Error;
};

}  // namespace beststop
