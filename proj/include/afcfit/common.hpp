#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace afcfit {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input files (CSV/JSON/PNM).
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that violates a domain invariant (n > m, negative distance, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Out-of-range run parameters (sigma, grid, bins, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Bad values passed to a pure operation (non-finite coordinate, j out of range).
class InputError : public Error {
public:
    using Error::Error;
};

// Optimisation blew up (nan/inf loss).
class TrainingError : public Error {
public:
    using Error::Error;
};

template <typename... Args>
std::string cat(Args&&... args) {
    std::ostringstream out;
    (out << ... << args);
    return out.str();
}

}  // namespace afcfit
