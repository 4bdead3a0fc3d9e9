#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skel {

// Input text could not be parsed. Line and column are 1-based; 0 means unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0);

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

// The input uses a construct outside the supported subset.
class UnsupportedConstruct : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StateCapExceeded : public std::runtime_error {
public:
    StateCapExceeded(std::size_t cap, std::size_t frontier);

    std::size_t cap() const noexcept { return cap_; }
    std::size_t frontier() const noexcept { return frontier_; }

private:
    std::size_t cap_;
    std::size_t frontier_;
};

class UnfoldCapExceeded : public std::runtime_error {
public:
    explicit UnfoldCapExceeded(std::size_t cap);

    std::size_t cap() const noexcept { return cap_; }

private:
    std::size_t cap_;
};

// Raised when exploration is interrupted by a deadline or a stop request.
class Interrupted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedFormula : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownPlace : public std::runtime_error {
public:
    explicit UnknownPlace(const std::string& name);
};

} // namespace skel
