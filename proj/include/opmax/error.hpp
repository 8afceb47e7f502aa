#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace opmax {

// Bad parameter or configuration value. Surfaced before any simulation work.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed text input (edge lists, config files).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A distance- or resistance-based quantity was requested on a disconnected graph.
class DisconnectedGraph : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Pearson correlation of a constant vector.
class UndefinedCorrelation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

}  // namespace opmax
