#pragma once

#include <stdexcept>
#include <string>

namespace prodiv {

// Base of every error the toolkit throws on bad data or failed computation.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input files (manifest rows, tree rows, lexicons, artifacts).
class InputError : public Error {
public:
    using Error::Error;
};

// Invalid configuration or command-line usage. The CLI maps this to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A numerical routine cannot produce a defined value (zero vectors, degenerate
// matrices, diverging training).
class ComputeError : public Error {
public:
    using Error::Error;
};

} // namespace prodiv
