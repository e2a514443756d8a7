#pragma once

#include <stdexcept>
#include <string>

namespace kgr {

// Error categories; the CLI maps each onto a distinct exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input data; the message names the offending line when known.
class ParseError : public Error {
public:
    using Error::Error;
};

// An entity/relation id or name does not resolve in the vocabulary.
class LookupError : public Error {
public:
    using Error::Error;
};

// A caller violated an operation precondition (empty inputs, bad ranges).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Invalid or missing configuration (flags, environment, training setup).
class ConfigError : public Error {
public:
    using Error::Error;
};

// A remote generation call failed after all retries.
class TransportError : public Error {
public:
    TransportError(const std::string& what, int status, int attempts)
        : Error(what), status(status), attempts(attempts) {}

    int status;    // last HTTP status; 0 when no response was received
    int attempts;  // total attempts made, including retries
};

// A scripted mock client ran out of scripted responses.
class MockExhaustedError : public Error {
public:
    using Error::Error;
};

}  // namespace kgr
