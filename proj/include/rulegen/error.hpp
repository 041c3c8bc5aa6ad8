#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rulegen {

/// Raised when an operation is called outside its contract (bad index,
/// non-bijective permutation, oversized oracle input, unknown builtin, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by the text loaders. `line()` is 1-based; 0 means "no specific line".
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string & message) :
        std::runtime_error(line == 0 ? message : "line " + std::to_string(line) + ": " + message),
        line_(line),
        message_(message)
    {
    }

    auto line() const noexcept -> std::size_t { return line_; }
    auto message() const noexcept -> const std::string & { return message_; }

private:
    std::size_t line_;
    std::string message_;
};

}
