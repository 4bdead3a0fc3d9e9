#include "skel/error.hpp"

namespace skel {

namespace {
std::string located(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}
} // namespace

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(located(message, line, column)), line_(line), column_(column) {}

StateCapExceeded::StateCapExceeded(std::size_t cap, std::size_t frontier)
    : std::runtime_error("state cap of " + std::to_string(cap) + " exceeded with " +
                         std::to_string(frontier) + " states still on the frontier"),
      cap_(cap), frontier_(frontier) {}

UnfoldCapExceeded::UnfoldCapExceeded(std::size_t cap)
    : std::runtime_error("unfolding would exceed the cap of " + std::to_string(cap) +
                         " transitions"),
      cap_(cap) {}

UnknownPlace::UnknownPlace(const std::string& name)
    : std::runtime_error("unknown place '" + name + "'") {}

} // namespace skel
