#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace ssa {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structurally invalid problem data (self-loops, duplicate pairs, bad indices).
class MalformedInput : public Error {
public:
    using Error::Error;
};

/// Vector lengths or indices that do not fit the model.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Instances on which the closed-form parameters are undefined.
class DegenerateInstance : public Error {
public:
    using Error::Error;
};

/// Invalid annealing, search or report configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Instance-file syntax errors. Carries the 1-based line number and, once
/// known, the source file name.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::string message, std::string source = {})
        : Error((source.empty() ? std::string("line ") : source + ":") + std::to_string(line) + ": " + message),
          line_(line),
          message_(std::move(message)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& message() const noexcept { return message_; }

    ParseError with_source(const std::string& source) const { return ParseError(line_, message_, source); }

private:
    std::size_t line_;
    std::string message_;
};

/// Output destination could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ssa
