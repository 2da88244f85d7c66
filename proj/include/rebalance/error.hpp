#pragma once

#include <stdexcept>
#include <string>

namespace rebalance {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid input data (parse failures, NaN cells, empty files).
class DataError : public Error {
public:
    using Error::Error;
};

/// Invalid parameters or identifiers supplied by the caller.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A sampler's own filter left no instances to generate from.
class EmptySeedSet : public Error {
public:
    explicit EmptySeedSet(const std::string& sampler)
        : Error("empty seed set (" + sampler + ")") {}
};

}  // namespace rebalance
