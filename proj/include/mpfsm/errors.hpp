#ifndef MPFSM_ERRORS_HPP
#define MPFSM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpfsm {

/// Caller passed inconsistent arguments (mismatched alphabets, bad port index, ...).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// A model or trace file could not be parsed; carries a 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string msg = what + " (line " + std::to_string(line);
        if (column != 0)
            msg += ", column " + std::to_string(column);
        return msg + ")";
    }

    std::size_t line_;
    std::size_t column_;
};

/// An operation's precondition does not hold for the given machines.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

/// A bounded search exceeded its node budget; results would be incomplete.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mpfsm

#endif
